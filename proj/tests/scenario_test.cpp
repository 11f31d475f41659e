#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkdsim/runner.hpp"
#include "test_support.hpp"

using namespace qkdsim;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in, data_dir());
}

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("qkdsim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(QKDSIM_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Scenario, DefaultsMatchCanonicalSettings) {
  Scenario s = parse("topology = usnet.topo\n");
  EXPECT_EQ(s.kappa_bits, 4000u);
  EXPECT_DOUBLE_EQ(s.duration_s, 100.0);
  EXPECT_DOUBLE_EQ(s.thresholds.min_bits, 2e6);
  EXPECT_DOUBLE_EQ(s.thresholds.warn_bits, 10e6);
  EXPECT_DOUBLE_EQ(s.thresholds.max_bits, 50e6);
  EXPECT_EQ(s.topology, (data_dir() / "usnet.topo").lexically_normal().string());
}

TEST(Scenario, RoundTripIsByteIdentical) {
  for (const char* name : {"secoqc-reroute.scn", "usnet-paper-sweep.scn"}) {
    Scenario s = load_scenario(data_dir() / "scenarios" / name);
    const std::string once = serialize(s);
    std::istringstream in(once);
    EXPECT_EQ(serialize(parse_scenario(in)), once) << name;
  }
  Scenario odd = parse(
      "topology = secoqc.topo\nlevel = 0.30000000000000004\npool_init_bits = 12345.678\n"
      "arrivals = deterministic\nextrapolate = false\nrouting = static-min-hop\nflow = 1 2 0.1\n"
      "track = 2 4\nrate_alpha_db_per_km = 0.17\n");
  const std::string once = serialize(odd);
  std::istringstream in(once);
  EXPECT_EQ(serialize(parse_scenario(in)), once);
}

TEST(Scenario, Errors) {
  EXPECT_THROW(parse("topology = usnet.topo\nlevel = 1.2\n"), ConfigError);
  EXPECT_THROW(parse("topology = usnet.topo\npool_warn_bits = 1e6\n"), ConfigError);
  EXPECT_THROW(parse("topology = usnet.topo\nprotocol = aodv\n"), ConfigError);
  EXPECT_THROW(parse("topology = usnet.topo\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse("topology = usnet.topo\nseed = abc\n"), ConfigError);
  EXPECT_THROW(parse("level = 0.5\n"), ConfigError);
  EXPECT_THROW(parse("topology = usnet.topo\njust a line\n"), ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent.scn"), ConfigError);
  EXPECT_THROW(run_scenario(parse("topology = missing.topo\n")), ConfigError);
}

TEST(Sweep, RowsAndFailures) {
  SweepSpec spec;
  spec.topology = data_dir() / "secoqc.topo";
  spec.protocols = {Protocol::Olsr};
  spec.levels = {0.2};
  spec.seeds = 3;
  spec.base.duration_s = 3.0;
  auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2].seed, 3u);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  std::istringstream back(csv.str());
  std::string header;
  std::getline(back, header);
  EXPECT_EQ(header, kSweepHeader);

  spec.canonical_sweep = true;
  EXPECT_NO_THROW(run_sweep(spec));
  spec.levels = {0.5};
  EXPECT_THROW(run_sweep(spec), ConfigError);

  SweepSpec bad = spec;
  bad.canonical_sweep = false;
  bad.topology = "/nonexistent.topo";
  bad.seeds = 1;
  auto failed = run_sweep(bad);
  ASSERT_EQ(failed.size(), 1u);
  EXPECT_FALSE(failed[0].summary);
  std::ostringstream out;
  write_sweep_csv(out, failed);
  EXPECT_NE(out.str().find(",failed"), std::string::npos);
}

TEST(Schemas, UnitsInHeaders) {
  // every numeric column names its unit or is a dimensionless ratio/count
  for (const std::string header : {std::string(kTimeseriesHeader), std::string(kSweepHeader)}) {
    std::istringstream in(header);
    for (std::string col; std::getline(in, col, ',');) {
      const bool unit = col.ends_with("_s") || col.ends_with("_bits") || col.ends_with("_bps");
      const bool dimensionless = col == "pdr" || col == "qku" || col == "pdr_overall" ||
                                 col == "level" || col == "seed" || col == "protocol" ||
                                 col == "status" || col.starts_with("packets_") ||
                                 col.starts_with("links_") || col.starts_with("drops_");
      EXPECT_TRUE(unit || dimensionless) << col;
    }
  }
}

TEST(Cli, RunWritesOutputsAndIsDeterministic) {
  const fs::path out1 = temp_dir("run1"), out2 = temp_dir("run2");
  const std::string scn = (data_dir() / "scenarios" / "secoqc-reroute.scn").string();
  ASSERT_EQ(cli("run --scenario " + scn + " --out " + out1.string()), 0);
  ASSERT_EQ(cli("run --scenario " + scn + " --out " + out2.string()), 0);
  std::ifstream a(out1 / "summary.json"), b(out2 / "summary.json");
  auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
  EXPECT_EQ(ja["trace_hash"], jb["trace_hash"]);
  EXPECT_TRUE(ja.contains("qku"));
  EXPECT_TRUE(ja.contains("drops_by_reason"));
  ASSERT_FALSE(ja["path_switches"].empty());
  bool saw = false;
  for (const auto& ps : ja["path_switches"]) {
    if (ps["from"] == std::vector<int>{2, 4} && ps["to"] == std::vector<int>{2, 5, 4}) saw = true;
  }
  EXPECT_TRUE(saw);
  auto ts = lines(out1 / "timeseries.csv");
  EXPECT_EQ(ts.front(), kTimeseriesHeader);
  EXPECT_EQ(ts.size(), 1u + 45u);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = temp_dir("codes");
  {
    std::ofstream bad(dir / "bad.scn");
    bad << "topology = nope.topo\n";
  }
  EXPECT_EQ(cli("run --scenario " + (dir / "bad.scn").string() + " --out " + dir.string()), 2);
  {
    std::ofstream bad(dir / "level.scn");
    bad << "topology = " << (data_dir() / "secoqc.topo").string() << "\nlevel = 3\n";
  }
  EXPECT_EQ(cli("run --scenario " + (dir / "level.scn").string() + " --out " + dir.string()), 2);
  EXPECT_EQ(cli("capacity --topology " + (data_dir() / "secoqc.topo").string()), 0);
}

TEST(Cli, EmptySweepWritesHeaderOnly) {
  const fs::path dir = temp_dir("empty");
  ASSERT_EQ(cli("sweep --topology " + (data_dir() / "secoqc.topo").string() + " --protocols olsr --levels 0.2 --seeds 0 --out " + dir.string()), 0);
  auto l = lines(dir / "sweep.csv");
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l[0], kSweepHeader);
}

TEST(Cli, SweepWithFailureExitsOne) {
  const fs::path dir = temp_dir("fail");
  {
    std::ofstream bad(dir / "disconnected.topo");
    bad << "nodes 3\nlink 1 2 5\n";
  }
  EXPECT_EQ(cli("sweep --topology " + (dir / "disconnected.topo").string() + " --protocols olsr --levels 0.2 --seeds 2 --duration 2 --out " + dir.string()), 1);
  auto l = lines(dir / "sweep.csv");
  ASSERT_EQ(l.size(), 3u);
  EXPECT_NE(l[1].find("failed"), std::string::npos);
}

TEST(Cli, CapacityMatchesLibrary) {
  const fs::path dir = temp_dir("cap");
  const std::string cmd = std::string(QKDSIM_CLI) + " capacity --topology " +
                          (data_dir() / "usnet.topo").string() + " > " + (dir / "cap.txt").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(dir / "cap.txt");
  double v = 0;
  in >> v;
  EXPECT_NEAR(v, its_capacity(usnet(), 4000), 1e-6);
}
