#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkdsim/types.hpp"

namespace qkdsim {

/// Exponential-attenuation surrogate for the secret key rate of a fiber link:
/// rate = r0_bps * 10^(-alpha_db_per_km * length_km / 10).
struct RateModel {
  double r0_bps = 10e6;
  double alpha_db_per_km = 0.2;
};

double key_rate_from_length(double length_km, const RateModel& model);

struct Link {
  NodeId a = 0;
  NodeId b = 0;
  double length_km = 0.0;
  double key_gen_rate_bps = 0.0;

  bool has_endpoint(NodeId n) const { return n == a || n == b; }
  NodeId other(NodeId n) const { return n == a ? b : a; }
};

struct Adjacency {
  NodeId neighbor;
  LinkId link;
};

/// Immutable, connected, undirected simple graph of trusted nodes 1..N.
class Topology {
 public:
  /// Validates the link set; throws ConfigError on self-loops, duplicate
  /// edges, out-of-range ids, non-positive rates or a disconnected graph.
  Topology(std::size_t node_count, std::vector<Link> links);

  std::size_t node_count() const { return node_count_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(id); }

  /// Neighbors of `n` in ascending NodeId order.
  const std::vector<Adjacency>& adjacent(NodeId n) const { return adjacency_.at(n - 1); }
  std::optional<LinkId> find_link(NodeId u, NodeId v) const;
  bool contains(NodeId n) const { return n >= 1 && n <= node_count_; }

  /// Parses the line-oriented format:
  ///   nodes <N>
  ///   link <u> <v> <length_km> [rate_bps]
  /// Links without an explicit rate use `model`.
  static Topology parse(std::istream& in, const RateModel& model = {});
  static Topology load(const std::filesystem::path& path, const RateModel& model = {});

 private:
  std::size_t node_count_;
  std::vector<Link> links_;
  std::vector<std::vector<Adjacency>> adjacency_;
  std::vector<LinkId> pair_index_;  // node_count x node_count, kNoLink if absent
};

/// Removes one link, for what-if analysis. Throws ConfigError if the result
/// is disconnected.
Topology without_link(const Topology& topo, NodeId u, NodeId v);

}  // namespace qkdsim
