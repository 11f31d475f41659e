// Command-line front end: run, sweep, capacity.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qkdsim/runner.hpp"

namespace fs = std::filesystem;
using namespace qkdsim;

namespace {

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  return f;
}

int cmd_run(const fs::path& scenario_path, const fs::path& out_dir) {
  Scenario s = load_scenario(scenario_path);
  RunResult r = run_scenario(s);
  fs::create_directories(out_dir);
  auto js = open_out(out_dir / "summary.json");
  write_summary_json(js, s, r);
  auto ts = open_out(out_dir / "timeseries.csv");
  write_timeseries_csv(ts, r);
  std::cout << "qku=" << csv_cell(r.summary.qku) << " pdr=" << csv_cell(r.summary.pdr_overall)
            << " routing_key_bits=" << r.summary.routing_key_bits << '\n';
  return 0;
}

int cmd_sweep(SweepSpec spec, const std::string& protocols, const std::string& levels, const fs::path& out_dir) {
  for (const auto& p : split(protocols)) spec.protocols.push_back(parse_protocol(p));
  for (const auto& l : split(levels)) {
    double v = 0.0;
    try {
      v = std::stod(l);
    } catch (const std::exception&) {
      throw ConfigError("bad level '" + l + "'");
    }
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("level " + l + " outside [0, 1]");
    spec.levels.push_back(v);
  }
  auto rows = run_sweep(spec);
  fs::create_directories(out_dir);
  auto csv = open_out(out_dir / "sweep.csv");
  write_sweep_csv(csv, rows);
  int rc = 0;
  for (const auto& row : rows) {
    if (!row.summary) {
      std::cerr << "run " << to_string(row.protocol) << " level=" << row.level << " seed=" << row.seed
                << " failed: " << row.error << '\n';
      rc = 1;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trusted-relay QKD network routing simulator"};
  app.require_subcommand(1);

  fs::path scenario, run_out;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--scenario", scenario, "Scenario file")->required();
  run->add_option("--out", run_out, "Output directory")->required();

  SweepSpec spec;
  std::string protocols, levels;
  fs::path sweep_out, sweep_scenario;
  auto* sweep = app.add_subcommand("sweep", "Run protocol x level x seed combinations");
  sweep->add_option("--topology", spec.topology, "Topology file")->required();
  sweep->add_option("--protocols", protocols, "Comma-separated: olsr,qolsr,multispf");
  sweep->add_option("--levels", levels, "Comma-separated levels in [0, 1]");
  sweep->add_option("--seeds", spec.seeds, "Number of seeds")->default_val(5);
  sweep->add_option("--base-seed", spec.base_seed, "First seed")->default_val(1);
  sweep->add_option("--duration", spec.base.duration_s, "Simulated seconds")->default_val(100.0);
  sweep->add_option("--base-scenario", sweep_scenario, "Scenario supplying the remaining settings");
  sweep->add_option("--out", sweep_out, "Output directory")->required();
  sweep->add_flag("--paper-sweep", spec.canonical_sweep, "Restrict levels to the canonical six");

  fs::path cap_topo;
  std::uint32_t kappa = 4000;
  auto* cap = app.add_subcommand("capacity", "Print the uniform all-pairs capacity in bits/s");
  cap->add_option("--topology", cap_topo, "Topology file")->required();
  cap->add_option("--kappa", kappa, "Packet size in bits")->default_val(4000);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, run_out);
    if (*sweep) {
      if (!sweep_scenario.empty()) {
        const double duration = spec.base.duration_s;
        spec.base = load_scenario(sweep_scenario);
        if (sweep->count("--duration") > 0) spec.base.duration_s = duration;
      }
      if (spec.canonical_sweep && levels.empty()) {
        for (double l : canonical_levels()) spec.levels.push_back(l);
      }
      return cmd_sweep(std::move(spec), protocols, levels, sweep_out);
    }
    if (*cap) {
      std::cout.precision(17);
      std::cout << its_capacity(Topology::load(cap_topo), kappa) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const SimulationIntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
