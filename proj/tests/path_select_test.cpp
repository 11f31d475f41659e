#include <gtest/gtest.h>

#include <random>

#include "qkdsim/path_select.hpp"
#include "test_support.hpp"

using namespace qkdsim;
using namespace testing_support;

TEST(MinHop, TieBreaksLexicographically) {
  // square 1-2-4, 1-3-4: both two hops, lower next hop wins
  LinkGraph g(4);
  g.add_edge(1, 3);
  g.add_edge(3, 4);
  g.add_edge(1, 2);
  g.add_edge(2, 4);
  auto r = min_hop_routes(g, 1);
  EXPECT_EQ(r.at(4).path, (std::vector<NodeId>{1, 2, 4}));
  EXPECT_EQ(r.at(4).hop_count(), 2u);
  EXPECT_EQ(r.at(4).next_hop(), 2u);
  EXPECT_FALSE(r.count(1));
}

TEST(MinHop, UnreachableOmitted) {
  LinkGraph g(3);
  g.add_edge(1, 2);
  auto r = min_hop_routes(g, 1);
  EXPECT_EQ(r.size(), 1u);
  EXPECT_FALSE(r.count(3));
}

TEST(Widest, PrefersWiderThenShorter) {
  LinkGraph g(5);
  g.add_edge(1, 2, 30);
  g.add_edge(2, 5, 30);
  g.add_edge(1, 3, 10);
  g.add_edge(3, 5, 40);
  g.add_edge(1, 4, 30);
  g.add_edge(4, 2, 30);
  auto r = widest_routes(g, 1);
  EXPECT_EQ(r.at(5).path, (std::vector<NodeId>{1, 2, 5}));
  EXPECT_DOUBLE_EQ(r.at(5).metric, 30);
}

TEST(Widest, EqualWidthsFallBackToMinHop) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    LinkGraph g = random_graph(rng, 10, 0.3, false);
    for (NodeId s = 1; s <= 10; ++s) {
      auto w = widest_routes(g, s);
      auto h = min_hop_routes(g, s);
      ASSERT_EQ(w.size(), h.size());
      for (auto& [d, r] : h) ASSERT_EQ(w.at(d).path, r.path);
    }
  }
}

TEST(WidestProperty, MatchesBruteForceOnSmallGraphs) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 7;
    LinkGraph g = random_graph(rng, n, 0.4, true);
    for (NodeId s = 1; s <= n; ++s) {
      auto routes = widest_routes(g, s);
      for (NodeId d = 1; d <= n; ++d) {
        if (d == s) continue;
        auto want = best_simple_path(g, s, d, [&](const auto& p) { return bottleneck(g, p); });
        ASSERT_EQ(routes.at(d).path, want) << "graph " << i << " " << s << "->" << d;
        ASSERT_EQ(routes.at(d).metric, bottleneck(g, want));
      }
    }
  }
}

TEST(MinHopProperty, MatchesBfsAndLexOracle) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 7;
    LinkGraph g = random_graph(rng, n, 0.4, false);
    for (NodeId s = 1; s <= n; ++s) {
      auto routes = min_hop_routes(g, s);
      auto dist = bfs_distances(g, s);
      for (NodeId d = 1; d <= n; ++d) {
        if (d == s) continue;
        ASSERT_EQ(routes.at(d).hop_count(), *dist[d]);
        auto want = best_simple_path(g, s, d, [](const auto& p) { return -static_cast<double>(p.size()); });
        ASSERT_EQ(routes.at(d).path, want);
      }
    }
  }
}

TEST(MinHopProperty, UsnetAllPairsAgainstBfs) {
  const auto topo = usnet();
  LinkGraph g = graph_of(topo);
  std::size_t pairs = 0;
  for (NodeId s = 1; s <= topo.node_count(); ++s) {
    auto routes = min_hop_routes(g, s);
    auto dist = bfs_distances(g, s);
    for (NodeId d = 1; d <= topo.node_count(); ++d) {
      if (d == s) continue;
      const Route& r = routes.at(d);
      ASSERT_EQ(r.hop_count(), *dist[d]);
      for (std::size_t k = 0; k + 1 < r.path.size(); ++k) ASSERT_TRUE(g.has_edge(r.path[k], r.path[k + 1]));
      ++pairs;
    }
  }
  EXPECT_EQ(pairs, 552u);
}

TEST(MinHopProperty, HopByHopConsistent) {
  // following next hops from each node reproduces the source's chosen path
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 12;
    LinkGraph g = random_graph(rng, n, 0.25, false);
    std::vector<RouteMap> all(n + 1);
    for (NodeId s = 1; s <= n; ++s) all[s] = min_hop_routes(g, s);
    for (NodeId s = 1; s <= n; ++s) {
      for (auto& [d, r] : all[s]) {
        std::vector<NodeId> walk{s};
        while (walk.back() != d) walk.push_back(all[walk.back()].at(d).next_hop());
        ASSERT_EQ(walk, r.path);
      }
    }
  }
}
