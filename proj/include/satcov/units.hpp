#pragma once

#include <cmath>

namespace satcov {

inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kKmToM = 1000.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// dBm -> W
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace satcov
