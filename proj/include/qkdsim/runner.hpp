#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qkdsim/scenario.hpp"
#include "qkdsim/simulator.hpp"

namespace qkdsim {

/// Builds the simulator inputs for a scenario: the level-driven full mesh
/// plus any explicit and background flows.
struct PreparedRun {
  Topology topology;
  SimConfig config;
  SimOptions options;
  Workload workload;
};
PreparedRun prepare(const Scenario& s);

RunResult run_scenario(const Scenario& s);

/// summary.json: run aggregates, drop reasons, path switches and trace hash.
/// Undefined ratios are null.
void write_summary_json(std::ostream& out, const Scenario& s, const RunResult& r);

/// timeseries.csv: one row per metrics bucket.
inline constexpr const char* kTimeseriesHeader =
    "t_start_s,packets_sent,packets_delivered,pdr,keys_delivered_bits,keys_total_bits,"
    "routing_key_bits,mean_owd_s,links_ready,links_warning,links_unavailable,mean_pool_bits";
void write_timeseries_csv(std::ostream& out, const RunResult& r);

inline constexpr const char* kSweepHeader =
    "protocol,level,seed,qku,pdr_overall,routing_cost_bits,mean_owd_s,drops_no_route,"
    "drops_key_insufficient,drops_ttl_exceeded,status";

struct SweepSpec {
  std::filesystem::path topology;
  std::vector<Protocol> protocols;
  std::vector<double> levels;
  std::uint64_t seeds = 0;      ///< number of seeds; seed i = base_seed + i
  std::uint64_t base_seed = 1;
  bool canonical_sweep = false;     ///< only the canonical six levels are allowed
  Scenario base;                ///< everything else (duration, kappa, ...)
};

struct SweepRow {
  Protocol protocol;
  double level;
  std::uint64_t seed;
  std::optional<RunSummary> summary;  ///< empty on failure
  std::string error;
};

/// Runs every combination in (protocol, level, seed) order. A failing member
/// yields a row with an error and does not stop the sweep.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// CSV cell for an optional value: "NA" when undefined.
std::string csv_cell(const std::optional<double>& v);

}  // namespace qkdsim
