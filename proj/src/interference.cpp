#include "satcov/interference.hpp"

#include <cmath>
#include <stdexcept>

#include "satcov/quadrature.hpp"
#include "satcov/units.hpp"

namespace satcov {

double beamforming_gain_db(double g0_db, int n_t, int k) {
  if (k < 1 || k > n_t)
    throw std::domain_error("beamforming gain requires 1 <= K <= N_t");
  return g0_db + 10.0 * std::log10(static_cast<double>(n_t - k + 1));
}

double serving_gain_linear(double g0_db, int n_t, int k, double g_rx_main_db,
                           double carrier_hz) {
  const double free_space_db =
      20.0 * std::log10(kSpeedOfLightMps / (4.0 * M_PI * carrier_hz));
  return db_to_linear(beamforming_gain_db(g0_db, n_t, k) + g_rx_main_db +
                      free_space_db);
}

InterferenceLaplace::InterferenceLaplace(const RingGeometry& ring,
                                         const LinkBudget& budget,
                                         const FadingParams& fading)
    : lambda_m2_(ring.density_per_km2 / (kKmToM * kKmToM)),
      rmin_m_(ring.inner_radius_km * kKmToM),
      rmax_m_(ring.outer_radius_km * kKmToM),
      gbar_(budget.interferer_gain_ratio),
      alpha_(budget.path_loss_exponent),
      sigma_bar2_(budget.normalized_noise()),
      rate_(fading.beta() - fading.c_fad()),
      m_(fading.m()) {
  if (!(gbar_ >= 0.0 && gbar_ <= 1.0))
    throw std::invalid_argument("interferer gain ratio must lie in [0, 1]");
  if (!(alpha_ >= 2.0))
    throw std::invalid_argument("path loss exponent must be >= 2");
  coeff_.reserve(m_);
  double zfact = 1.0;
  for (int z = 0; z < m_; ++z) {
    if (z >= 1) zfact *= z;
    coeff_.push_back(zeta_coeff(fading, z) * zfact);
  }
}

// Integral over the interference annulus appearing in g^(j):
//   j = 0: int (1 - sum_z c_z (rate + s w)^-(z+1)) v dv
//   j >= 1: int sum_z c_z (z+1)_j w^j (rate + s w)^-(z+1+j) v dv
// with w = Gbar v^-alpha, v in meters.
double InterferenceLaplace::radial_integral(int j, double s,
                                            double rk_m) const {
  auto integrand = [&](double v) {
    const double w = gbar_ * std::pow(v, -alpha_);
    const double base = rate_ + s * w;
    double sum = 0.0;
    if (j == 0) {
      // 1 - sum_z c_z (rate + sw)^-(z+1), written through the mixture
      // weights w_z = c_z / rate^(z+1) (which sum to 1) so small s does not
      // cancel catastrophically.
      const double lg = std::log1p(s * w / rate_);
      double ratez = rate_;  // rate^(z+1)
      for (int z = 0; z < m_; ++z) {
        if (z >= 1) ratez *= rate_;
        sum += coeff_[z] / ratez * -std::expm1(-(z + 1.0) * lg);
      }
      return sum * v;
    }
    const double wj = std::pow(w, j);
    for (int z = 0; z < m_; ++z)
      sum += coeff_[z] * pochhammer(z + 1.0, j) * wj /
             std::pow(base, z + 1 + j);
    return sum * v;
  };
  return integrate(integrand, rk_m, rmax_m_, 1e-9, 1e-12);
}

double InterferenceLaplace::exponent(double s, double rk_km) const {
  const double rk_m = rk_km * kKmToM;
  if (rk_m < rmin_m_ * (1.0 - 1e-12) || rk_m > rmax_m_ * (1.0 + 1e-12))
    throw std::domain_error("rk outside [r_min, r_max]");
  if (s == 0.0) return 0.0;
  double g = -s * sigma_bar2_;
  if (gbar_ > 0.0 && rk_m < rmax_m_)
    g -= 2.0 * M_PI * lambda_m2_ * radial_integral(0, s, rk_m);
  return g;
}

double InterferenceLaplace::exponent_derivative(int j, double s,
                                                double rk_km) const {
  if (j < 1) throw std::domain_error("exponent_derivative needs j >= 1");
  const double rk_m = rk_km * kKmToM;
  double g = (j == 1) ? -sigma_bar2_ : 0.0;
  if (gbar_ > 0.0 && rk_m < rmax_m_) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    g += 2.0 * M_PI * lambda_m2_ * sign * radial_integral(j, s, rk_m);
  }
  return g;
}

double InterferenceLaplace::value(double s, double rk_km) const {
  return std::exp(exponent(s, rk_km));
}

double InterferenceLaplace::derivative(int v, double s, double rk_km) const {
  return derivatives(v, s, rk_km).back();
}

std::vector<double> InterferenceLaplace::derivatives(int max_v, double s,
                                                     double rk_km) const {
  if (max_v < 0 || max_v >= m_)
    throw std::domain_error("laplace derivative order must lie in [0, m-1]");
  std::vector<double> l(max_v + 1);
  l[0] = value(s, rk_km);
  if (max_v == 0) return l;
  std::vector<double> g(max_v + 1);  // g[j] = g^(j)(s), j >= 1
  for (int j = 1; j <= max_v; ++j) g[j] = exponent_derivative(j, s, rk_km);
  // L^(n) = sum_{j=0}^{n-1} C(n-1, j) g^(j+1) L^(n-1-j)
  for (int n = 1; n <= max_v; ++n) {
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n - 1; ++j) {
      acc += binom * g[j + 1] * l[n - 1 - j];
      binom *= static_cast<double>(n - 1 - j) / (j + 1);
    }
    l[n] = acc;
  }
  return l;
}

}  // namespace satcov
