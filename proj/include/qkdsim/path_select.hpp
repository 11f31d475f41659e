#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "qkdsim/types.hpp"

namespace qkdsim {

/// Undirected weighted graph over nodes 1..N used for route computation.
class LinkGraph {
 public:
  struct Edge {
    NodeId to;
    double weight;
  };

  explicit LinkGraph(std::size_t node_count) : adj_(node_count) {}

  std::size_t node_count() const { return adj_.size(); }

  /// Adds u-v once; a repeated edge keeps its first weight.
  void add_edge(NodeId u, NodeId v, double weight = 1.0) {
    if (u == v || has_edge(u, v)) return;
    adj_[u - 1].push_back({v, weight});
    adj_[v - 1].push_back({u, weight});
  }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& a = adj_[u - 1];
    return std::any_of(a.begin(), a.end(), [v](const Edge& e) { return e.to == v; });
  }

  std::optional<double> weight(NodeId u, NodeId v) const {
    for (const Edge& e : adj_[u - 1]) {
      if (e.to == v) return e.weight;
    }
    return std::nullopt;
  }

  const std::vector<Edge>& edges_of(NodeId u) const { return adj_[u - 1]; }

 private:
  std::vector<std::vector<Edge>> adj_;
};

struct Route {
  std::vector<NodeId> path;  ///< starts at the source, ends at the destination
  double metric = 0.0;

  NodeId next_hop() const { return path.at(1); }
  std::size_t hop_count() const { return path.size() - 1; }

  friend bool operator==(const Route&, const Route&) = default;
};

/// destination -> route; unreachable destinations are absent.
using RouteMap = std::map<NodeId, Route>;

namespace detail {

/// Breadth-first search that returns, for every reachable node, the
/// lexicographically smallest among its shortest paths from `src`, using only
/// edges accepted by `allow`.
///
/// Paths in one BFS layer all have the same length, so comparing
/// path(u)+[v] across predecessors u reduces to comparing path(u); ranking
/// each layer by (rank of parent, node id) therefore orders it
/// lexicographically.
template <typename EdgeFilter>
std::vector<std::vector<NodeId>> lex_bfs(const LinkGraph& g, NodeId src, EdgeFilter allow) {
  const std::size_t n = g.node_count();
  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> rank(n, kUnseen);
  std::vector<NodeId> parent(n, 0);
  std::vector<std::uint32_t> layer_of(n, kUnseen);

  std::vector<NodeId> layer{src};
  rank[src - 1] = 0;
  layer_of[src - 1] = 0;
  std::uint32_t next_rank = 1;
  std::uint32_t depth = 0;
  while (!layer.empty()) {
    std::vector<NodeId> next;
    for (NodeId u : layer) {  // `layer` is sorted by rank
      for (const auto& e : g.edges_of(u)) {
        if (!allow(u, e)) continue;
        NodeId v = e.to;
        if (layer_of[v - 1] == kUnseen) {
          layer_of[v - 1] = depth + 1;
          parent[v - 1] = u;
          next.push_back(v);
        } else if (layer_of[v - 1] == depth + 1 && rank[u - 1] < rank[parent[v - 1] - 1]) {
          parent[v - 1] = u;
        }
      }
    }
    std::sort(next.begin(), next.end(), [&](NodeId x, NodeId y) {
      const auto rx = rank[parent[x - 1] - 1], ry = rank[parent[y - 1] - 1];
      return rx != ry ? rx < ry : x < y;
    });
    for (NodeId v : next) rank[v - 1] = next_rank++;
    layer = std::move(next);
    ++depth;
  }

  std::vector<std::vector<NodeId>> paths(n);
  for (NodeId v = 1; v <= n; ++v) {
    if (layer_of[v - 1] == kUnseen) continue;
    std::vector<NodeId> p;
    for (NodeId cur = v; cur != src; cur = parent[cur - 1]) p.push_back(cur);
    p.push_back(src);
    std::reverse(p.begin(), p.end());
    paths[v - 1] = std::move(p);
  }
  return paths;
}

}  // namespace detail

/// Minimum-hop routes. Ties go to the lower next hop, then the
/// lexicographically smaller path (both are lexicographic path order).
inline RouteMap min_hop_routes(const LinkGraph& g, NodeId src) {
  auto paths = detail::lex_bfs(g, src, [](NodeId, const LinkGraph::Edge&) { return true; });
  RouteMap out;
  for (NodeId v = 1; v <= g.node_count(); ++v) {
    if (v == src || paths[v - 1].empty()) continue;
    double hops = static_cast<double>(paths[v - 1].size() - 1);
    out.emplace(v, Route{std::move(paths[v - 1]), hops});
  }
  return out;
}

/// Maximum bottleneck weight from `src` to every node (widest-path Dijkstra).
/// Unreachable nodes hold nullopt; `src` itself holds +inf.
inline std::vector<std::optional<double>> bottleneck_widths(const LinkGraph& g, NodeId src) {
  std::vector<std::optional<double>> width(g.node_count());
  std::vector<bool> done(g.node_count(), false);
  using Item = std::pair<double, NodeId>;
  auto cmp = [](const Item& x, const Item& y) {
    return x.first != y.first ? x.first < y.first : x.second > y.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  width[src - 1] = kInfinity;
  pq.push({kInfinity, src});
  while (!pq.empty()) {
    auto [w, u] = pq.top();
    pq.pop();
    if (done[u - 1]) continue;
    done[u - 1] = true;
    for (const auto& e : g.edges_of(u)) {
      const double cand = std::min(w, e.weight);
      auto& slot = width[e.to - 1];
      if (!slot || cand > *slot) {
        slot = cand;
        pq.push({cand, e.to});
      }
    }
  }
  return width;
}

/// Widest (maximum-bottleneck) routes. Among paths achieving the best
/// bottleneck, fewer hops win, then the lexicographically smaller path.
inline RouteMap widest_routes(const LinkGraph& g, NodeId src) {
  const auto width = bottleneck_widths(g, src);
  std::map<double, std::vector<NodeId>> by_width;
  for (NodeId v = 1; v <= g.node_count(); ++v) {
    if (v != src && width[v - 1]) by_width[*width[v - 1]].push_back(v);
  }
  RouteMap out;
  for (const auto& [w, dests] : by_width) {
    const double threshold = w;
    auto paths = detail::lex_bfs(
        g, src, [threshold](NodeId, const LinkGraph::Edge& e) { return e.weight >= threshold; });
    for (NodeId v : dests) out.emplace(v, Route{std::move(paths[v - 1]), w});
  }
  return out;
}

}  // namespace qkdsim
