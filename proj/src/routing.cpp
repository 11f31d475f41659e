#include "qkdsim/routing.hpp"

#include <string>

namespace qkdsim {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Olsr: return "olsr";
    case Protocol::Qolsr: return "qolsr";
    case Protocol::MultiSpf: return "multispf";
  }
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "olsr") return Protocol::Olsr;
  if (name == "qolsr") return Protocol::Qolsr;
  if (name == "multispf") return Protocol::MultiSpf;
  throw ConfigError("unknown protocol '" + std::string(name) + "' (expected olsr | qolsr | multispf)");
}

bool hello_gate(Protocol p, KeyPool& pool, Seconds now) {
  if (p == Protocol::Qolsr) return hello_gate_qolsr(pool, now);
  return true;
}

std::optional<LinkMetricInputs> known_link_metric(const OlsrNode& node, LinkId link, Seconds now,
                                                  bool extrapolate) {
  auto it = node.key_state().find(link);
  if (it == node.key_state().end()) return std::nullopt;
  const KeyStateRecord& rec = it->second;
  const auto& t = node.thresholds();
  LinkMetricInputs m;
  m.gen_rate_bps = rec.ad.gen_rate_bps;
  m.traffic_bps = rec.ad.measured_consumption_bps;
  m.max_bits = rec.ad.max_bits;
  m.min_bits = t.min_bits;
  m.cur_bits = extrapolate ? extrapolate_cur_bits(rec.ad, now - rec.measured_at, t.min_bits)
                           : rec.ad.cur_bits;
  return m;
}

LinkGraph known_link_graph(const OlsrNode& node, const RouteOptions& opts, Seconds now) {
  const Topology& topo = node.topology();
  LinkGraph g(topo.node_count());

  auto add = [&](NodeId u, NodeId v, LinkId link) {
    if (opts.protocol == Protocol::Olsr) {
      g.add_edge(u, v, 1.0);
      return;
    }
    auto m = known_link_metric(node, link, now, opts.extrapolate);
    if (!m) {
      // Known adjacency without key state yet: usable, lowest priority.
      g.add_edge(u, v, opts.protocol == Protocol::Qolsr ? -kInfinity : 0.0);
      return;
    }
    const PoolState st = classify(m->cur_bits, node.thresholds());
    if (st == PoolState::Unavailable) return;
    // A remote link below WARN has stopped its HELLOs and is about to be
    // dropped by its endpoints; routing through it from afar invites loops.
    // The endpoints themselves keep it until the neighbor entry expires.
    const bool remote = u != node.id() && v != node.id();
    if (opts.protocol == Protocol::Qolsr && remote && st == PoolState::Warning) return;
    const double w = opts.protocol == Protocol::Qolsr ? recovery_capability(*m) : m->cur_bits;
    g.add_edge(u, v, w);
  };

  for (NodeId n : node.symmetric_neighbors(now)) {
    add(node.id(), n, node.neighbor_table().at(n).link);
  }
  for (const auto& [via, reach] : node.two_hop_view(now)) {
    for (NodeId far : reach) {
      if (far == node.id()) continue;
      if (auto link = topo.find_link(via, far)) add(via, far, *link);
    }
  }
  for (const auto& [key, rec] : node.topology_table()) {
    if (rec.expiry <= now) continue;
    const auto [last_hop, dest] = key;
    if (last_hop == node.id() || dest == node.id()) continue;
    auto link = topo.find_link(last_hop, dest);
    if (!link) continue;
    add(last_hop, dest, *link);
  }
  return g;
}

RouteMap compute_routes_min_hop(const OlsrNode& node, Seconds now) {
  return min_hop_routes(known_link_graph(node, {Protocol::Olsr, false}, now), node.id());
}

RouteMap compute_routes_qolsr(const OlsrNode& node, Seconds now, bool extrapolate) {
  return widest_routes(known_link_graph(node, {Protocol::Qolsr, extrapolate}, now), node.id());
}

RouteMap compute_routes_multispf(const OlsrNode& node, Seconds now, bool extrapolate) {
  return widest_routes(known_link_graph(node, {Protocol::MultiSpf, extrapolate}, now), node.id());
}

RouteMap compute_routes(const OlsrNode& node, const RouteOptions& opts, Seconds now) {
  switch (opts.protocol) {
    case Protocol::Olsr: return compute_routes_min_hop(node, now);
    case Protocol::Qolsr: return compute_routes_qolsr(node, now, opts.extrapolate);
    case Protocol::MultiSpf: return compute_routes_multispf(node, now, opts.extrapolate);
  }
  return {};
}

}  // namespace qkdsim
