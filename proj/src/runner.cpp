#include "qkdsim/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace qkdsim {

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::string csv_cell(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

PreparedRun prepare(const Scenario& s) {
  s.validate();
  Topology topo = Topology::load(s.topology, s.rate_model);

  SimConfig cfg{s.duration_s, s.seed, s.hello_interval_s, s.tc_interval_s, s.neighbor_hold_multiplier,
                s.per_hop_processing_delay_s, s.fiber_speed_km_per_s, s.metrics_tick_s};

  SimOptions opts;
  opts.protocol = s.protocol;
  opts.extrapolate_key_state = s.extrapolate;
  opts.routing = s.routing;
  opts.thresholds = s.thresholds;
  opts.initial_pool_bits = s.pool_init_bits;
  for (const auto& p : s.pool_init) {
    auto link = topo.find_link(p.a, p.b);
    if (!link) {
      throw ConfigError("pool_init: no link " + std::to_string(p.a) + "-" + std::to_string(p.b));
    }
    opts.initial_pool_override[*link] = p.bits;
  }
  opts.tracked_pairs = s.track;

  Workload w = make_workload(s.level, topo, s.kappa_bits, s.arrivals);
  for (const auto& f : s.flows) w.flows.push_back({f.src, f.dst, f.rate_pps, false});
  for (const auto& f : s.background) w.flows.push_back({f.src, f.dst, f.rate_pps, true});
  return {std::move(topo), cfg, std::move(opts), std::move(w)};
}

RunResult run_scenario(const Scenario& s) {
  PreparedRun p = prepare(s);
  Simulator sim(std::move(p.topology), p.config, std::move(p.options), std::move(p.workload));
  return sim.run();
}

void write_summary_json(std::ostream& out, const Scenario& s, const RunResult& r) {
  const RunSummary& m = r.summary;
  nlohmann::json j;
  j["protocol"] = std::string(to_string(s.protocol));
  j["level"] = s.level;
  j["seed"] = s.seed;
  j["duration_s"] = s.duration_s;
  j["kappa_bits"] = s.kappa_bits;
  j["packets_sent"] = m.packets_sent;
  j["packets_delivered"] = m.packets_delivered;
  j["pdr_overall"] = opt(m.pdr_overall);
  j["qku"] = opt(m.qku);
  j["dps_bits"] = m.dps_bits;
  j["tps_bits"] = m.tps_bits;
  j["dropped_key_bits"] = r.log.dropped_key_bits();
  j["routing_key_bits"] = m.routing_key_bits;
  j["mean_owd_s"] = opt(m.mean_owd_s);
  nlohmann::json drops;
  for (std::size_t i = 0; i < kDropReasonCount; ++i) {
    drops[std::string(to_string(static_cast<DropReason>(i)))] = m.drops[i];
  }
  j["drops_by_reason"] = drops;
  j["in_flight_packets"] = r.in_flight_packets;
  j["route_changes"] = r.route_changes;
  j["events_executed"] = r.events_executed;
  j["trace_hash"] = hex64(r.trace_hash);
  nlohmann::json switches = nlohmann::json::array();
  for (const auto& ps : r.path_switches) {
    switches.push_back({{"time_s", ps.time}, {"src", ps.src}, {"dst", ps.dst}, {"from", ps.from},
                        {"to", ps.to}});
  }
  j["path_switches"] = switches;
  out << j.dump(2) << '\n';
}

void write_timeseries_csv(std::ostream& out, const RunResult& r) {
  out << kTimeseriesHeader << '\n';
  const auto& ticks = r.log.ticks();
  for (std::size_t i = 0; i < r.summary.buckets.size(); ++i) {
    const BucketSummary& b = r.summary.buckets[i];
    out << num(b.start) << ',' << b.packets_sent << ',' << b.packets_delivered << ',' << csv_cell(b.pdr)
        << ',' << b.keys_delivered_bits << ',' << b.keys_total_bits << ',' << b.routing_key_bits << ','
        << csv_cell(b.mean_owd_s) << ',';
    // the tick closing this bucket, if the run reached it
    if (i < ticks.size()) {
      const TickRecord& t = ticks[i];
      out << t.links_ready << ',' << t.links_warning << ',' << t.links_unavailable << ','
          << num(t.mean_pool_bits);
    } else {
      out << "NA,NA,NA,NA";
    }
    out << '\n';
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.canonical_sweep) {
    const auto& allowed = canonical_levels();
    for (double l : spec.levels) {
      if (std::find(allowed.begin(), allowed.end(), l) == allowed.end()) {
        throw ConfigError("--paper-sweep: level " + num(l) + " is not one of the canonical levels");
      }
    }
  }
  std::vector<SweepRow> rows;
  for (Protocol p : spec.protocols) {
    for (double level : spec.levels) {
      for (std::uint64_t i = 0; i < spec.seeds; ++i) {
        SweepRow row{p, level, spec.base_seed + i, std::nullopt, {}};
        Scenario s = spec.base;
        s.topology = spec.topology.string();
        s.protocol = p;
        s.level = level;
        s.seed = row.seed;
        try {
          row.summary = run_scenario(s).summary;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& row : rows) {
    out << to_string(row.protocol) << ',' << num(row.level) << ',' << row.seed << ',';
    if (row.summary) {
      const RunSummary& m = *row.summary;
      out << csv_cell(m.qku) << ',' << csv_cell(m.pdr_overall) << ',' << m.routing_key_bits << ','
          << csv_cell(m.mean_owd_s) << ',' << m.drops[0] << ',' << m.drops[1] << ',' << m.drops[2]
          << ",ok";
    } else {
      out << "NA,NA,NA,NA,NA,NA,NA,failed";
    }
    out << '\n';
  }
}

}  // namespace qkdsim
