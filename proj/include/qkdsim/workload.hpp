#pragma once

#include <cstdint>
#include <vector>

#include "qkdsim/topology.hpp"

namespace qkdsim {

enum class ArrivalProcess { Poisson, Deterministic };

struct Flow {
  NodeId src = 0;
  NodeId dst = 0;
  double rate_pps = 0.0;
  /// Pinned flows always take the direct src-dst link and ignore routing.
  /// They model external key consumers on a single link.
  bool pinned = false;
};

struct Workload {
  std::vector<Flow> flows;
  std::uint32_t kappa_bits = 4000;
  ArrivalProcess arrivals = ArrivalProcess::Poisson;
};

struct CapacityReport {
  /// Ordered pairs whose min-hop path crosses each link (indexed by LinkId).
  std::vector<std::uint64_t> link_load;
  double per_pair_pps = 0.0;  ///< largest uniform per-pair rate every link sustains
  double capacity_bps = 0.0;  ///< per_pair_pps * pairs * kappa
  LinkId bottleneck = kNoLink;
};

/// Uniform all-pairs capacity under static minimum-hop routing (same
/// tie-breaks as OLSR route computation): the aggregate offered load at which
/// the most loaded link consumes exactly its generation rate.
CapacityReport its_capacity_report(const Topology& topo, std::uint32_t kappa_bits);
double its_capacity(const Topology& topo, std::uint32_t kappa_bits);

/// Full-mesh workload with aggregate offered load `level` * its_capacity.
/// Throws std::invalid_argument for level outside [0, 1].
Workload make_workload(double level, const Topology& topo, std::uint32_t kappa_bits,
                       ArrivalProcess arrivals = ArrivalProcess::Poisson);

/// The communication levels of the canonical sweep.
inline const std::vector<double>& canonical_levels() {
  static const std::vector<double> levels{0.01, 0.2, 0.4, 0.6, 0.8, 1.0};
  return levels;
}

}  // namespace qkdsim
