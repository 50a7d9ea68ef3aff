#include "satcov/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "satcov/units.hpp"

namespace satcov {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
  if (pos != v.size())
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  return x;
}

long parse_long(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x))
    throw ConfigError("'" + key + "' must be an integer, got " + v);
  return static_cast<long>(x);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  if (out.empty()) throw ConfigError("'" + key + "' needs at least one value");
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SphereGeometry ExperimentConfig::geometry() const {
  return SphereGeometry(earth_radius_km, earth_radius_km + altitude_km,
                        min_visibility_km);
}

double ExperimentConfig::density_per_km2() const {
  return density_for_mean_visible(geometry(), mean_visible);
}

RingGeometry ExperimentConfig::ring() const {
  return to_ring(geometry(), density_per_km2());
}

FadingParams ExperimentConfig::fading() const {
  if (fading_m == 0)
    throw ConfigError("fading parameters are required (section [fading])");
  return FadingParams(fading_m, fading_b, fading_omega);
}

RadioConfig ExperimentConfig::radio() const {
  const double sigma2_w =
      dbm_to_watt(noise_density_dbm_hz) * bandwidth_hz;
  return RadioConfig{dbm_to_watt(tx_power_dbm),
                     sigma2_w,
                     g0_db,
                     g_rx_main_db,
                     carrier_hz,
                     interferer_gain_ratio,
                     path_loss_exponent,
                     n_t};
}

std::vector<double> ExperimentConfig::gamma_grid_db() const {
  std::vector<double> out;
  if (gamma_db_points == 1) {
    out.push_back(gamma_db_min);
    return out;
  }
  for (int i = 0; i < gamma_db_points; ++i)
    out.push_back(gamma_db_min + (gamma_db_max - gamma_db_min) * i /
                                     (gamma_db_points - 1));
  return out;
}

std::vector<double> ExperimentConfig::gamma_grid_linear() const {
  std::vector<double> out;
  for (double g : gamma_grid_db()) out.push_back(db_to_linear(g));
  return out;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "geometry.earth_radius_km=" << fmt(earth_radius_km) << "\n"
      << "geometry.altitude_km=" << fmt(altitude_km) << "\n"
      << "geometry.min_visibility_km=" << fmt(min_visibility_km) << "\n"
      << "fading.m=" << fading_m << "\n"
      << "fading.b=" << fmt(fading_b) << "\n"
      << "fading.omega=" << fmt(fading_omega) << "\n"
      << "radio.tx_power_dbm=" << fmt(tx_power_dbm) << "\n"
      << "radio.noise_density_dbm_hz=" << fmt(noise_density_dbm_hz) << "\n"
      << "radio.bandwidth_hz=" << fmt(bandwidth_hz) << "\n"
      << "radio.g0_db=" << fmt(g0_db) << "\n"
      << "radio.g_rx_main_db=" << fmt(g_rx_main_db) << "\n"
      << "radio.carrier_hz=" << fmt(carrier_hz) << "\n"
      << "radio.interferer_gain_ratio=" << fmt(interferer_gain_ratio) << "\n"
      << "radio.path_loss_exponent=" << fmt(path_loss_exponent) << "\n"
      << "radio.n_t=" << n_t << "\n"
      << "network.mean_visible=" << fmt(mean_visible) << "\n"
      << "network.k=" << k << "\n"
      << "run.gamma_db_min=" << fmt(gamma_db_min) << "\n"
      << "run.gamma_db_max=" << fmt(gamma_db_max) << "\n"
      << "run.gamma_db_points=" << gamma_db_points << "\n";
  out << "run.delta=";
  for (size_t i = 0; i < delta_list.size(); ++i)
    out << (i ? " " : "") << fmt(delta_list[i]);
  out << "\n"
      << "run.trials=" << trials << "\n"
      << "run.seed=" << seed << "\n"
      << "run.mode=" << (mode == SampleMode::ring ? "ring" : "sphere")
      << "\n";
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_fading = false;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "geometry" && section != "fading" &&
          section != "radio" && section != "network" && section != "run")
        throw ConfigError("unknown section [" + section + "]");
      if (section == "fading") saw_fading = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("key '" + key + "' outside any section");
    const std::string full = section + "." + key;
    if (!seen.insert(full).second)
      throw ConfigError("duplicate key '" + full + "'");

    if (full == "geometry.earth_radius_km")
      cfg.earth_radius_km = parse_double(full, value);
    else if (full == "geometry.altitude_km")
      cfg.altitude_km = parse_double(full, value);
    else if (full == "geometry.min_visibility_km")
      cfg.min_visibility_km = parse_double(full, value);
    else if (full == "fading.m")
      cfg.fading_m = static_cast<int>(parse_long(full, value));
    else if (full == "fading.b")
      cfg.fading_b = parse_double(full, value);
    else if (full == "fading.omega")
      cfg.fading_omega = parse_double(full, value);
    else if (full == "radio.tx_power_dbm")
      cfg.tx_power_dbm = parse_double(full, value);
    else if (full == "radio.noise_density_dbm_hz")
      cfg.noise_density_dbm_hz = parse_double(full, value);
    else if (full == "radio.bandwidth_hz")
      cfg.bandwidth_hz = parse_double(full, value);
    else if (full == "radio.g0_db")
      cfg.g0_db = parse_double(full, value);
    else if (full == "radio.g_rx_main_db")
      cfg.g_rx_main_db = parse_double(full, value);
    else if (full == "radio.carrier_hz")
      cfg.carrier_hz = parse_double(full, value);
    else if (full == "radio.interferer_gain_ratio")
      cfg.interferer_gain_ratio = parse_double(full, value);
    else if (full == "radio.path_loss_exponent")
      cfg.path_loss_exponent = parse_double(full, value);
    else if (full == "radio.n_t")
      cfg.n_t = static_cast<int>(parse_long(full, value));
    else if (full == "network.mean_visible")
      cfg.mean_visible = parse_double(full, value);
    else if (full == "network.k")
      cfg.k = static_cast<int>(parse_long(full, value));
    else if (full == "run.gamma_db_min")
      cfg.gamma_db_min = parse_double(full, value);
    else if (full == "run.gamma_db_max")
      cfg.gamma_db_max = parse_double(full, value);
    else if (full == "run.gamma_db_points")
      cfg.gamma_db_points = static_cast<int>(parse_long(full, value));
    else if (full == "run.delta")
      cfg.delta_list = parse_list(full, value);
    else if (full == "run.trials")
      cfg.trials = parse_long(full, value);
    else if (full == "run.seed")
      cfg.seed = static_cast<std::uint64_t>(parse_long(full, value));
    else if (full == "run.mode") {
      if (value == "ring")
        cfg.mode = SampleMode::ring;
      else if (value == "sphere")
        cfg.mode = SampleMode::sphere;
      else
        throw ConfigError("run.mode must be 'ring' or 'sphere', got " +
                          value);
    } else
      throw ConfigError("unknown key '" + full + "'");
  }
  if (!saw_fading || cfg.fading_m == 0)
    throw ConfigError("config must provide the fading parameters "
                      "(section [fading] with m, b, omega)");
  if (cfg.gamma_db_points < 1)
    throw ConfigError("run.gamma_db_points must be >= 1");
  if (cfg.trials < 0) throw ConfigError("run.trials must be nonnegative");
  if (cfg.k < 1) throw ConfigError("network.k must be >= 1");
  if (cfg.n_t < 1) throw ConfigError("radio.n_t must be >= 1");
  if (cfg.k > cfg.n_t)
    throw ConfigError("network.k must not exceed radio.n_t");
  if (!(cfg.mean_visible > 0.0))
    throw ConfigError("network.mean_visible must be positive");
  // Geometry and fading constructor checks surface as ConfigError too.
  try {
    cfg.geometry();
    cfg.fading();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace satcov
