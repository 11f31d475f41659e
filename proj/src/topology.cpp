#include "qkdsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qkdsim {

double key_rate_from_length(double length_km, const RateModel& model) {
  if (!(length_km >= 0.0)) {
    throw std::invalid_argument("key_rate_from_length: negative length");
  }
  return model.r0_bps * std::pow(10.0, -model.alpha_db_per_km * length_km / 10.0);
}

Topology::Topology(std::size_t node_count, std::vector<Link> links)
    : node_count_(node_count), links_(std::move(links)), adjacency_(node_count),
      pair_index_(node_count * node_count, kNoLink) {
  if (node_count_ < 2) throw ConfigError("topology needs at least 2 nodes");
  for (LinkId id = 0; id < links_.size(); ++id) {
    Link& l = links_[id];
    if (!contains(l.a) || !contains(l.b)) {
      throw ConfigError("link " + std::to_string(l.a) + "-" + std::to_string(l.b) +
                        " references a node outside 1.." + std::to_string(node_count_));
    }
    if (l.a == l.b) throw ConfigError("self-loop on node " + std::to_string(l.a));
    if (!(l.length_km >= 0.0)) throw ConfigError("negative link length");
    if (!(l.key_gen_rate_bps > 0.0)) {
      throw ConfigError("link " + std::to_string(l.a) + "-" + std::to_string(l.b) +
                        " has non-positive key rate");
    }
    if (l.a > l.b) std::swap(l.a, l.b);
    auto& slot = pair_index_[(l.a - 1) * node_count_ + (l.b - 1)];
    if (slot != kNoLink) {
      throw ConfigError("duplicate link " + std::to_string(l.a) + "-" + std::to_string(l.b));
    }
    slot = id;
    pair_index_[(l.b - 1) * node_count_ + (l.a - 1)] = id;
    adjacency_[l.a - 1].push_back({l.b, id});
    adjacency_[l.b - 1].push_back({l.a, id});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Adjacency& x, const Adjacency& y) { return x.neighbor < y.neighbor; });
  }

  std::vector<bool> seen(node_count_, false);
  std::vector<NodeId> stack{1};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (const auto& [m, _] : adjacency_[n - 1]) {
      if (!seen[m - 1]) {
        seen[m - 1] = true;
        ++reached;
        stack.push_back(m);
      }
    }
  }
  if (reached != node_count_) throw ConfigError("topology is not connected");
}

std::optional<LinkId> Topology::find_link(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return std::nullopt;
  LinkId id = pair_index_[(u - 1) * node_count_ + (v - 1)];
  if (id == kNoLink) return std::nullopt;
  return id;
}

Topology Topology::parse(std::istream& in, const RateModel& model) {
  std::optional<std::size_t> nodes;
  std::vector<Link> links;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    auto fail = [&](const std::string& what) {
      return ConfigError("topology line " + std::to_string(lineno) + ": " + what);
    };
    if (keyword == "nodes") {
      long long n = 0;
      if (nodes || !(ls >> n) || n < 2) throw fail("expected single 'nodes <N>' with N >= 2");
      nodes = static_cast<std::size_t>(n);
    } else if (keyword == "link") {
      if (!nodes) throw fail("'link' before 'nodes'");
      long long u = 0, v = 0;
      double length = 0.0;
      if (!(ls >> u >> v >> length) || u < 1 || v < 1) throw fail("expected 'link <u> <v> <length_km> [rate_bps]'");
      if (length < 0.0) throw fail("negative length");
      double rate = 0.0;
      if (!(ls >> rate)) {
        rate = key_rate_from_length(length, model);
      }
      std::string extra;
      if (ls >> extra) throw fail("trailing tokens");
      links.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), length, rate});
    } else {
      throw fail("unknown keyword '" + keyword + "'");
    }
  }
  if (!nodes) throw ConfigError("topology: missing 'nodes' header");
  return Topology(*nodes, std::move(links));
}

Topology Topology::load(const std::filesystem::path& path, const RateModel& model) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file " + path.string());
  return parse(in, model);
}

Topology without_link(const Topology& topo, NodeId u, NodeId v) {
  auto victim = topo.find_link(u, v);
  if (!victim) throw ConfigError("no such link");
  std::vector<Link> kept;
  for (LinkId id = 0; id < topo.links().size(); ++id) {
    if (id != *victim) kept.push_back(topo.link(id));
  }
  return Topology(topo.node_count(), std::move(kept));
}

}  // namespace qkdsim
