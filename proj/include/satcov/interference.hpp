#pragma once

#include <vector>

#include "satcov/geometry.hpp"
#include "satcov/special.hpp"

namespace satcov {

/// Normalized link budget of the desired and interfering links. Linear units;
/// distances feeding the path loss are in meters.
struct LinkBudget {
  double tx_power_w;             // P
  double noise_power_w;          // sigma^2
  double serving_gain_linear;    // G_1, includes the free-space constant
  double interferer_gain_ratio;  // Gbar = G_n / G_1 for out-of-cluster n
  double path_loss_exponent;     // alpha

  double normalized_noise() const {
    return noise_power_w / (tx_power_w * serving_gain_linear);
  }
};

/// Main-lobe transmit gain with K-1 degrees of freedom spent on nulls:
/// G0 + 10 log10(N_t - K + 1). K must not exceed N_t.
double beamforming_gain_db(double g0_db, int n_t, int k);

/// Serving-link gain G_1 (linear) assembled from the dB-domain antenna gains
/// and the free-space term 20 log10(c / (4 pi f_c)).
double serving_gain_linear(double g0_db, int n_t, int k, double g_rx_main_db,
                           double carrier_hz);

/// Radio-side configuration; produces a LinkBudget per cluster size.
struct RadioConfig {
  double tx_power_w;
  double noise_power_w;
  double g0_db;
  double g_rx_main_db;
  double carrier_hz;
  double interferer_gain_ratio;
  double path_loss_exponent;
  int n_t;

  LinkBudget link_budget(int k) const {
    return LinkBudget{tx_power_w, noise_power_w,
                      serving_gain_linear(g0_db, n_t, k, g_rx_main_db,
                                          carrier_hz),
                      interferer_gain_ratio, path_loss_exponent};
  }
};

/// Laplace transform of out-of-cluster interference plus normalized noise,
/// conditioned on the Kth-nearest distance, and its high-order derivatives.
/// Geometry enters in km and is converted to meters internally so the
/// path-loss term stays consistent with the free-space constant.
class InterferenceLaplace {
 public:
  InterferenceLaplace(const RingGeometry& ring, const LinkBudget& budget,
                      const FadingParams& fading);

  /// Exponent g(s) of L(s) = exp(g(s)); g(0) = 0, g <= 0.
  double exponent(double s, double rk_km) const;

  /// j-th derivative g^(j)(s), closed form under the integral sign. j >= 1.
  double exponent_derivative(int j, double s, double rk_km) const;

  /// L(s) = exp(g(s)) in (0, 1].
  double value(double s, double rk_km) const;

  /// v-th derivative of L at s, 0 <= v <= m-1, via the binomial recurrence
  /// for derivatives of exp(g).
  double derivative(int v, double s, double rk_km) const;

  /// L^(0..max_v) in one call; shares the g-derivative quadratures.
  std::vector<double> derivatives(int max_v, double s, double rk_km) const;

  double normalized_noise() const { return sigma_bar2_; }

 private:
  double radial_integral(int j, double s, double rk_m) const;

  double lambda_m2_;   // ring density per m^2
  double rmin_m_;
  double rmax_m_;
  double gbar_;
  double alpha_;
  double sigma_bar2_;
  double rate_;                    // beta - c_fad
  int m_;
  std::vector<double> coeff_;      // zeta(z) * z!
};

}  // namespace satcov
