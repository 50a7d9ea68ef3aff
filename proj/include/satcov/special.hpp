#pragma once

#include <stdexcept>
#include <vector>

namespace satcov {

/// Shadowed-Rician fading parameters (integer Nakagami m, scatter half-power
/// b, LOS power Omega) with the derived mixture constants.
class FadingParams {
 public:
  FadingParams(int nakagami_m, double half_scatter_power,
               double los_power)
      : m_(nakagami_m), b_(half_scatter_power), omega_(los_power) {
    if (m_ < 1 || m_ > 20)
      throw std::invalid_argument("nakagami m must be an integer in [1, 20]");
    if (!(b_ > 0.0)) throw std::invalid_argument("b must be positive");
    if (!(omega_ >= 0.0)) throw std::invalid_argument("omega must be nonnegative");
  }

  int m() const { return m_; }
  double b() const { return b_; }
  double omega() const { return omega_; }

  double beta() const { return 1.0 / (2.0 * b_); }
  /// Named c_fad to keep clear of the speed of light.
  double c_fad() const {
    return omega_ / (2.0 * b_ * (2.0 * b_ * m_ + omega_));
  }
  /// Mean channel power 2b + Omega.
  double mean_power() const { return 2.0 * b_ + omega_; }

 private:
  int m_;
  double b_;
  double omega_;
};

/// Rising factorial (x)_z = x (x+1) ... (x+z-1), with (x)_0 = 1.
double pochhammer(double x, int z);

/// Upper incomplete gamma for positive integer a via the finite sum
/// (a-1)! e^{-x} sum_{v<a} x^v / v!.
double upper_incomplete_gamma(int a, double x);

/// Mixture coefficient zeta(z) of the channel-power PDF. Valid for
/// 0 <= z <= m-1; anything else is a domain error.
double zeta_coeff(const FadingParams& f, int z);

struct ErlangComponent {
  double weight;
  int shape;    // z + 1
  double rate;  // beta - c_fad
};

/// The channel power H is a finite nonnegative Erlang mixture; returns the
/// components. Weights sum to 1.
std::vector<ErlangComponent> erlang_mixture_weights(const FadingParams& f);

/// P[H > h], from the Erlang-mixture CDF.
double channel_power_ccdf(const FadingParams& f, double h);

/// Mixture density sum_z zeta(z) h^z exp(-(beta-c) h).
double channel_power_pdf(const FadingParams& f, double h);

/// Shadowed-Rician amplitude density of sqrt(H); kept for cross-validation
/// of the mixture form.
double channel_amplitude_pdf(const FadingParams& f, double x);

/// Kummer confluent hypergeometric 1F1(a; b; x) by direct series with
/// term-ratio stopping at relative 1e-12. Throws on non-convergence.
double confluent_1f1(double a, double b, double x);

}  // namespace satcov
