#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "satcov/geometry.hpp"
#include "satcov/interference.hpp"
#include "satcov/montecarlo.hpp"
#include "satcov/special.hpp"

namespace satcov {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat sectioned key=value experiment description. Defaults follow the
/// reference parameter set; the fading section has no physical default and
/// must be present.
struct ExperimentConfig {
  // [geometry]
  double earth_radius_km = 6371.0;
  double altitude_km = 500.0;
  double min_visibility_km = 0.0;

  // [fading] (required)
  int fading_m = 0;  // 0 marks "not provided"
  double fading_b = 0.0;
  double fading_omega = 0.0;

  // [radio]
  double tx_power_dbm = 43.0;
  double noise_density_dbm_hz = -174.0;
  double bandwidth_hz = 100e6;
  double g0_db = 20.0;
  double g_rx_main_db = 0.0;
  double carrier_hz = 13.5e9;
  double interferer_gain_ratio = 0.1;
  double path_loss_exponent = 2.0;
  int n_t = 16;

  // [network]
  double mean_visible = 5.0;  // lambda * |A|
  int k = 2;

  // [run]
  double gamma_db_min = -10.0;
  double gamma_db_max = 20.0;
  int gamma_db_points = 7;
  std::vector<double> delta_list = {0.5, 0.7, 0.9};
  long trials = 100000;
  std::uint64_t seed = 1;
  SampleMode mode = SampleMode::ring;

  SphereGeometry geometry() const;
  double density_per_km2() const;  // from mean_visible over the cap
  RingGeometry ring() const;
  FadingParams fading() const;
  RadioConfig radio() const;
  std::vector<double> gamma_grid_linear() const;
  std::vector<double> gamma_grid_db() const;

  /// Canonical key=value serialization, one line per key, section order and
  /// key order fixed. Hash and CSV echo both derive from it.
  std::string canonical() const;
  std::uint64_t hash() const;  // FNV-1a over canonical()
};

/// Parses the sectioned text format. Unknown sections or keys are errors;
/// so are malformed lines, duplicate keys, and a missing fading section.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

}  // namespace satcov
