#include "qkdsim/workload.hpp"

#include <limits>
#include <stdexcept>

#include "qkdsim/path_select.hpp"

namespace qkdsim {

CapacityReport its_capacity_report(const Topology& topo, std::uint32_t kappa_bits) {
  if (kappa_bits == 0) throw std::invalid_argument("its_capacity: kappa must be positive");
  LinkGraph g(topo.node_count());
  for (const auto& l : topo.links()) g.add_edge(l.a, l.b);

  CapacityReport rep;
  rep.link_load.assign(topo.links().size(), 0);
  for (NodeId s = 1; s <= topo.node_count(); ++s) {
    auto routes = min_hop_routes(g, s);
    if (routes.size() + 1 != topo.node_count()) throw ConfigError("its_capacity: disconnected topology");
    for (const auto& [dst, route] : routes) {
      for (std::size_t i = 0; i + 1 < route.path.size(); ++i) {
        ++rep.link_load[*topo.find_link(route.path[i], route.path[i + 1])];
      }
    }
  }

  rep.per_pair_pps = std::numeric_limits<double>::infinity();
  for (LinkId id = 0; id < topo.links().size(); ++id) {
    if (rep.link_load[id] == 0) continue;
    const double lambda = topo.link(id).key_gen_rate_bps /
                          (static_cast<double>(kappa_bits) * static_cast<double>(rep.link_load[id]));
    if (lambda < rep.per_pair_pps) {
      rep.per_pair_pps = lambda;
      rep.bottleneck = id;
    }
  }
  const double pairs = static_cast<double>(topo.node_count() * (topo.node_count() - 1));
  rep.capacity_bps = rep.per_pair_pps * pairs * kappa_bits;
  return rep;
}

double its_capacity(const Topology& topo, std::uint32_t kappa_bits) {
  return its_capacity_report(topo, kappa_bits).capacity_bps;
}

Workload make_workload(double level, const Topology& topo, std::uint32_t kappa_bits,
                       ArrivalProcess arrivals) {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw std::invalid_argument("communication level must lie in [0, 1]");
  }
  const double pairs = static_cast<double>(topo.node_count() * (topo.node_count() - 1));
  const double per_pair = level * its_capacity(topo, kappa_bits) / (pairs * kappa_bits);
  Workload w;
  w.kappa_bits = kappa_bits;
  w.arrivals = arrivals;
  if (per_pair <= 0.0) return w;
  for (NodeId s = 1; s <= topo.node_count(); ++s) {
    for (NodeId t = 1; t <= topo.node_count(); ++t) {
      if (s != t) w.flows.push_back({s, t, per_pair, false});
    }
  }
  return w;
}

}  // namespace qkdsim
