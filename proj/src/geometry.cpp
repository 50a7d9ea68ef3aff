#include "satcov/geometry.hpp"

namespace satcov {

double visible_cap_area(const SphereGeometry& geom) {
  return 2.0 * M_PI *
         (geom.orbit_radius() - geom.earth_radius() -
          geom.min_visibility_altitude()) *
         geom.orbit_radius();
}

double cap_area_within(const SphereGeometry& geom, double r_km) {
  const double tol = 1e-9 * geom.r_max();
  if (r_km < geom.r_min() - tol || r_km > geom.r_max() + tol)
    throw std::domain_error("cap_area_within: r outside [r_min, r_max]");
  const double rs = geom.orbit_radius();
  const double re = geom.earth_radius();
  const double h_r = ((rs * rs - re * re) - r_km * r_km) / (2.0 * re);
  return 2.0 * M_PI * (rs - re - h_r) * rs;
}

RingGeometry to_ring(const SphereGeometry& geom, double density_per_km2) {
  if (density_per_km2 < 0.0)
    throw std::invalid_argument("density must be nonnegative");
  return RingGeometry{
      geom.r_min(), geom.r_max(),
      density_per_km2 * geom.orbit_radius() / geom.earth_radius()};
}

double density_for_mean_visible(const SphereGeometry& geom,
                                double mean_visible) {
  if (mean_visible < 0.0)
    throw std::invalid_argument("mean visible count must be nonnegative");
  return mean_visible / visible_cap_area(geom);
}

}  // namespace satcov
