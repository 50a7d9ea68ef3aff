#pragma once

#include <cmath>
#include <stdexcept>

namespace satcov {

/// Geometry of the satellite sphere and the visible spherical cap above the
/// tangent plane at altitude h_E over the typical ground station.
/// All lengths in kilometers.
class SphereGeometry {
 public:
  SphereGeometry(double earth_radius_km, double orbit_radius_km,
                 double min_visibility_altitude_km)
      : earth_radius_(earth_radius_km),
        orbit_radius_(orbit_radius_km),
        min_visibility_altitude_(min_visibility_altitude_km) {
    if (!(earth_radius_ > 0.0))
      throw std::invalid_argument("earth radius must be positive");
    if (!(orbit_radius_ > earth_radius_))
      throw std::invalid_argument("orbit radius must exceed earth radius");
    if (!(min_visibility_altitude_ >= 0.0 &&
          min_visibility_altitude_ < orbit_radius_ - earth_radius_))
      throw std::invalid_argument(
          "visibility altitude must lie in [0, orbit altitude)");
  }

  double earth_radius() const { return earth_radius_; }
  double orbit_radius() const { return orbit_radius_; }
  double min_visibility_altitude() const { return min_visibility_altitude_; }

  /// Closest possible satellite distance (directly overhead).
  double r_min() const { return orbit_radius_ - earth_radius_; }

  /// Distance to a satellite on the rim of the visible cap.
  double r_max() const {
    return std::sqrt(orbit_radius_ * orbit_radius_ -
                     earth_radius_ * earth_radius_ -
                     2.0 * earth_radius_ * min_visibility_altitude_);
  }

 private:
  double earth_radius_;
  double orbit_radius_;
  double min_visibility_altitude_;
};

/// The 2D annulus the cap point process is replaced with: same inner/outer
/// distance range, density rescaled by R_S/R_E.
struct RingGeometry {
  double inner_radius_km;
  double outer_radius_km;
  double density_per_km2;  // rescaled intensity

  double ring_area() const {
    return M_PI * (outer_radius_km * outer_radius_km -
                   inner_radius_km * inner_radius_km);
  }
  double ring_area_within(double r_km) const {
    return M_PI * (r_km * r_km - inner_radius_km * inner_radius_km);
  }
  /// Poisson mean of the visible-satellite count.
  double mean_count() const { return density_per_km2 * ring_area(); }
};

/// Area of the visible cap, 2*pi*(R_S - R_E - h_E)*R_S. [km^2]
double visible_cap_area(const SphereGeometry& geom);

/// Area of the sub-cap holding all points closer than r to the station.
/// Rejects r outside [r_min, r_max].
double cap_area_within(const SphereGeometry& geom, double r_km);

/// Replacement of the cap process by an annulus process with the same void
/// probabilities.
RingGeometry to_ring(const SphereGeometry& geom, double density_per_km2);

/// Sphere density lambda [km^-2] giving the requested mean visible count.
double density_for_mean_visible(const SphereGeometry& geom,
                                double mean_visible);

}  // namespace satcov
