#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qkdsim/key_pool.hpp"
#include "qkdsim/routing.hpp"
#include "qkdsim/simulator.hpp"
#include "qkdsim/topology.hpp"
#include "qkdsim/workload.hpp"

namespace qkdsim {

struct FlowSpec {
  NodeId src = 0;
  NodeId dst = 0;
  double rate_pps = 0.0;
};

struct PoolInitSpec {
  NodeId a = 0;
  NodeId b = 0;
  double bits = 0.0;
};

/// Everything needed to reproduce one run. Defaults are the canonical
/// settings: 100 s, 500-byte packets, pools 2/10/50 Mbit.
struct Scenario {
  std::string topology;  ///< path; relative paths resolve against the scenario file
  Protocol protocol = Protocol::Qolsr;
  double level = 0.6;
  Seconds duration_s = 100.0;
  std::uint64_t seed = 1;
  std::uint32_t kappa_bits = 4000;
  PoolThresholds thresholds{};
  std::optional<double> pool_init_bits;  ///< unset: pools start full
  Seconds hello_interval_s = 2.0;
  Seconds tc_interval_s = 5.0;
  int neighbor_hold_multiplier = 3;
  Seconds per_hop_processing_delay_s = 1e-3;
  double fiber_speed_km_per_s = 2e5;
  Seconds metrics_tick_s = 1.0;
  RateModel rate_model{};
  ArrivalProcess arrivals = ArrivalProcess::Poisson;
  bool extrapolate = true;
  RoutingMode routing = RoutingMode::Dynamic;
  std::vector<FlowSpec> flows;       ///< extra routed flows
  std::vector<FlowSpec> background;  ///< pinned single-link consumers
  std::vector<PoolInitSpec> pool_init;
  std::vector<std::pair<NodeId, NodeId>> track;

  /// Throws ConfigError on invalid values (level range, thresholds, ...).
  void validate() const;
};

/// Parses the key=value format. `base_dir` resolves a relative topology path.
Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
/// Canonical text form; parse(serialize(s)) serializes to the same bytes.
std::string serialize(const Scenario& s);

std::string_view to_string(ArrivalProcess a);
std::string_view to_string(RoutingMode m);

}  // namespace qkdsim
