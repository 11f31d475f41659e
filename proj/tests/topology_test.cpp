#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "qkdsim/simulator.hpp"
#include "qkdsim/topology.hpp"
#include "test_support.hpp"

using namespace qkdsim;
using namespace testing_support;

TEST(RateModel, Attenuation) {
  EXPECT_DOUBLE_EQ(key_rate_from_length(0.0, {}), 10e6);
  EXPECT_NEAR(key_rate_from_length(50.0, {}), 1e6, 1e-6);
  EXPECT_THROW(key_rate_from_length(-1.0, {}), std::invalid_argument);
}

TEST(Topology, ParsesFormat) {
  std::istringstream in("# comment\nnodes 3\nlink 1 2 10 4e6  # explicit\nlink 3 2 50\n");
  Topology t = Topology::parse(in);
  ASSERT_EQ(t.node_count(), 3u);
  ASSERT_EQ(t.links().size(), 2u);
  EXPECT_DOUBLE_EQ(t.link(0).key_gen_rate_bps, 4e6);
  EXPECT_NEAR(t.link(1).key_gen_rate_bps, 1e6, 1e-6);
  EXPECT_EQ(t.link(1).a, 2u);
  EXPECT_EQ(t.link(1).b, 3u);
  EXPECT_EQ(*t.find_link(3, 2), 1u);
  EXPECT_FALSE(t.find_link(1, 3));
}

TEST(Topology, RejectsBadInput) {
  auto parse = [](const char* s) {
    std::istringstream in(s);
    return Topology::parse(in);
  };
  EXPECT_THROW(parse("link 1 2 3\n"), ConfigError);
  EXPECT_THROW(parse("nodes 3\nlink 1 2 5\n"), ConfigError);                    // disconnected
  EXPECT_THROW(parse("nodes 2\nlink 1 1 5\n"), ConfigError);                    // self-loop
  EXPECT_THROW(parse("nodes 2\nlink 1 2 5\nlink 2 1 6\n"), ConfigError);        // duplicate
  EXPECT_THROW(parse("nodes 2\nlink 1 3 5\n"), ConfigError);                    // range
  EXPECT_THROW(parse("nodes 2\nlink 1 2 -5\n"), ConfigError);
  EXPECT_THROW(parse("nodes 2\nlink 1 2 5 0\n"), ConfigError);
  EXPECT_THROW(parse("nodes 2\nedge 1 2 5\n"), ConfigError);
  EXPECT_THROW(Topology::load("/nonexistent/file.topo"), ConfigError);
}

TEST(Topology, BundledSecoqc) {
  Topology t = secoqc();
  EXPECT_EQ(t.node_count(), 6u);
  EXPECT_EQ(t.links().size(), 9u);
  EXPECT_DOUBLE_EQ(t.link(*t.find_link(2, 4)).key_gen_rate_bps, 5.6e6);
  EXPECT_DOUBLE_EQ(t.link(*t.find_link(2, 3)).key_gen_rate_bps, 4e6);
  EXPECT_DOUBLE_EQ(t.link(*t.find_link(3, 4)).key_gen_rate_bps, 8.5e6);
  EXPECT_DOUBLE_EQ(t.link(*t.find_link(2, 3)).length_km, 85.0);
}

TEST(Topology, BundledUsnet) {
  Topology t = usnet();
  EXPECT_EQ(t.node_count(), 24u);
  EXPECT_EQ(t.links().size(), 27u);
}

TEST(Topology, SecoqcWithoutDirectLinkHasFourPaths) {
  Topology t = without_link(secoqc(), 2, 4);
  std::set<std::vector<NodeId>> got;
  for (auto& p : simple_paths(graph_of(t), 2, 4)) got.insert(p);
  const std::set<std::vector<NodeId>> want{{2, 3, 4}, {2, 3, 5, 4}, {2, 5, 4}, {2, 5, 3, 4}};
  EXPECT_EQ(got, want);
}

TEST(Topology, LinkDelay) {
  Simulator sim(secoqc(), SimConfig{}, SimOptions{}, Workload{});
  EXPECT_NEAR(sim.link_delay(*sim.topology().find_link(2, 3)), 1.425e-3, 1e-15);
}
