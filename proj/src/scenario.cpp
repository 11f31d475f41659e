#include "qkdsim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qkdsim {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size()) {
    throw ConfigError("scenario: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

template <class Int>
Int parse_int(const std::string& v, const std::string& key) {
  Int out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size()) {
    throw ConfigError("scenario: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("scenario: '" + key + "' expects true or false");
}

std::vector<std::string> words(const std::string& v) {
  std::istringstream in(v);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

FlowSpec parse_flow(const std::string& v, const std::string& key) {
  auto w = words(v);
  if (w.size() != 3) throw ConfigError("scenario: '" + key + "' expects '<src> <dst> <rate_pps>'");
  return {parse_int<NodeId>(w[0], key), parse_int<NodeId>(w[1], key), parse_double(w[2], key)};
}

}  // namespace

std::string_view to_string(ArrivalProcess a) {
  return a == ArrivalProcess::Poisson ? "poisson" : "deterministic";
}

std::string_view to_string(RoutingMode m) {
  return m == RoutingMode::Dynamic ? "dynamic" : "static-min-hop";
}

void Scenario::validate() const {
  if (topology.empty()) throw ConfigError("scenario: topology is required");
  if (!(level >= 0.0 && level <= 1.0)) {
    throw ConfigError("scenario: level must lie in [0, 1], got " + fmt(level));
  }
  if (kappa_bits == 0) throw ConfigError("scenario: kappa_bits must be positive");
  thresholds.validate();
  if (pool_init_bits && !(*pool_init_bits >= 0.0 && *pool_init_bits <= thresholds.max_bits)) {
    throw ConfigError("scenario: pool_init_bits must lie in [0, pool_max_bits]");
  }
  for (const auto& p : pool_init) {
    if (!(p.bits >= 0.0 && p.bits <= thresholds.max_bits)) {
      throw ConfigError("scenario: pool_init bits must lie in [0, pool_max_bits]");
    }
  }
  if (!(rate_model.r0_bps > 0.0) || !(rate_model.alpha_db_per_km >= 0.0)) {
    throw ConfigError("scenario: invalid rate model");
  }
  SimConfig{duration_s, seed, hello_interval_s, tc_interval_s, neighbor_hold_multiplier,
            per_hop_processing_delay_s, fiber_speed_km_per_s, metrics_tick_s}
      .validate();
}

Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
  Scenario s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("scenario line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));

    if (key == "topology") {
      std::filesystem::path p(v);
      s.topology = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).lexically_normal().string();
    } else if (key == "protocol") s.protocol = parse_protocol(v);
    else if (key == "level") s.level = parse_double(v, key);
    else if (key == "duration_s") s.duration_s = parse_double(v, key);
    else if (key == "seed") s.seed = parse_int<std::uint64_t>(v, key);
    else if (key == "kappa_bits") s.kappa_bits = parse_int<std::uint32_t>(v, key);
    else if (key == "pool_min_bits") s.thresholds.min_bits = parse_double(v, key);
    else if (key == "pool_warn_bits") s.thresholds.warn_bits = parse_double(v, key);
    else if (key == "pool_max_bits") s.thresholds.max_bits = parse_double(v, key);
    else if (key == "pool_init_bits") s.pool_init_bits = parse_double(v, key);
    else if (key == "hello_interval_s") s.hello_interval_s = parse_double(v, key);
    else if (key == "tc_interval_s") s.tc_interval_s = parse_double(v, key);
    else if (key == "neighbor_hold_multiplier") s.neighbor_hold_multiplier = parse_int<int>(v, key);
    else if (key == "per_hop_processing_delay_s") s.per_hop_processing_delay_s = parse_double(v, key);
    else if (key == "fiber_speed_km_per_s") s.fiber_speed_km_per_s = parse_double(v, key);
    else if (key == "metrics_tick_s") s.metrics_tick_s = parse_double(v, key);
    else if (key == "rate_r0_bps") s.rate_model.r0_bps = parse_double(v, key);
    else if (key == "rate_alpha_db_per_km") s.rate_model.alpha_db_per_km = parse_double(v, key);
    else if (key == "arrivals") {
      if (v == "poisson") s.arrivals = ArrivalProcess::Poisson;
      else if (v == "deterministic") s.arrivals = ArrivalProcess::Deterministic;
      else throw ConfigError("scenario: arrivals must be poisson or deterministic");
    } else if (key == "extrapolate") s.extrapolate = parse_bool(v, key);
    else if (key == "routing") {
      if (v == "dynamic") s.routing = RoutingMode::Dynamic;
      else if (v == "static-min-hop") s.routing = RoutingMode::StaticMinHop;
      else throw ConfigError("scenario: routing must be dynamic or static-min-hop");
    } else if (key == "flow") s.flows.push_back(parse_flow(v, key));
    else if (key == "background") s.background.push_back(parse_flow(v, key));
    else if (key == "pool_init") {
      auto w = words(v);
      if (w.size() != 3) throw ConfigError("scenario: pool_init expects '<u> <v> <bits>'");
      s.pool_init.push_back({parse_int<NodeId>(w[0], key), parse_int<NodeId>(w[1], key),
                             parse_double(w[2], key)});
    } else if (key == "track") {
      auto w = words(v);
      if (w.size() != 2) throw ConfigError("scenario: track expects '<src> <dst>'");
      s.track.emplace_back(parse_int<NodeId>(w[0], key), parse_int<NodeId>(w[1], key));
    } else {
      throw ConfigError("scenario line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  return parse_scenario(in, path.parent_path());
}

std::string serialize(const Scenario& s) {
  std::ostringstream o;
  o << "topology = " << s.topology << '\n'
    << "protocol = " << to_string(s.protocol) << '\n'
    << "level = " << fmt(s.level) << '\n'
    << "duration_s = " << fmt(s.duration_s) << '\n'
    << "seed = " << s.seed << '\n'
    << "kappa_bits = " << s.kappa_bits << '\n'
    << "pool_min_bits = " << fmt(s.thresholds.min_bits) << '\n'
    << "pool_warn_bits = " << fmt(s.thresholds.warn_bits) << '\n'
    << "pool_max_bits = " << fmt(s.thresholds.max_bits) << '\n';
  if (s.pool_init_bits) o << "pool_init_bits = " << fmt(*s.pool_init_bits) << '\n';
  o << "hello_interval_s = " << fmt(s.hello_interval_s) << '\n'
    << "tc_interval_s = " << fmt(s.tc_interval_s) << '\n'
    << "neighbor_hold_multiplier = " << s.neighbor_hold_multiplier << '\n'
    << "per_hop_processing_delay_s = " << fmt(s.per_hop_processing_delay_s) << '\n'
    << "fiber_speed_km_per_s = " << fmt(s.fiber_speed_km_per_s) << '\n'
    << "metrics_tick_s = " << fmt(s.metrics_tick_s) << '\n'
    << "rate_r0_bps = " << fmt(s.rate_model.r0_bps) << '\n'
    << "rate_alpha_db_per_km = " << fmt(s.rate_model.alpha_db_per_km) << '\n'
    << "arrivals = " << to_string(s.arrivals) << '\n'
    << "extrapolate = " << (s.extrapolate ? "true" : "false") << '\n'
    << "routing = " << to_string(s.routing) << '\n';
  for (const auto& f : s.flows) o << "flow = " << f.src << ' ' << f.dst << ' ' << fmt(f.rate_pps) << '\n';
  for (const auto& f : s.background) {
    o << "background = " << f.src << ' ' << f.dst << ' ' << fmt(f.rate_pps) << '\n';
  }
  for (const auto& p : s.pool_init) o << "pool_init = " << p.a << ' ' << p.b << ' ' << fmt(p.bits) << '\n';
  for (const auto& [a, b] : s.track) o << "track = " << a << ' ' << b << '\n';
  return o.str();
}

}  // namespace qkdsim
