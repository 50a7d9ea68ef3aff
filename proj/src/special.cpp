#include "satcov/special.hpp"

#include <cmath>

namespace satcov {

double pochhammer(double x, int z) {
  if (z < 0) throw std::domain_error("pochhammer: negative order");
  double p = 1.0;
  for (int i = 0; i < z; ++i) p *= x + i;
  return p;
}

double upper_incomplete_gamma(int a, double x) {
  if (a < 1) throw std::domain_error("upper_incomplete_gamma: a must be >= 1");
  if (x < 0.0) throw std::domain_error("upper_incomplete_gamma: x must be >= 0");
  // (a-1)! e^{-x} sum_{v=0}^{a-1} x^v / v!
  double sum = 1.0;
  double term = 1.0;
  for (int v = 1; v < a; ++v) {
    term *= x / v;
    sum += term;
  }
  double fact = 1.0;
  for (int v = 2; v < a; ++v) fact *= v;
  return fact * std::exp(-x) * sum;
}

double zeta_coeff(const FadingParams& f, int z) {
  if (z < 0 || z >= f.m())
    throw std::domain_error("zeta_coeff: z must lie in [0, m-1]");
  const int m = f.m();
  const double b = f.b();
  const double omega = f.omega();
  const double c = f.c_fad();
  const double prefactor =
      std::pow(2.0 * b * m / (2.0 * b * m + omega), m) * f.beta();
  double zfact = 1.0;
  for (int i = 2; i <= z; ++i) zfact *= i;
  const double sign = (z % 2 == 0) ? 1.0 : -1.0;
  return prefactor * sign * pochhammer(1.0 - m, z) * std::pow(c, z) /
         (zfact * zfact);
}

std::vector<ErlangComponent> erlang_mixture_weights(const FadingParams& f) {
  const double rate = f.beta() - f.c_fad();
  std::vector<ErlangComponent> out;
  out.reserve(f.m());
  double zfact = 1.0;
  for (int z = 0; z < f.m(); ++z) {
    if (z >= 1) zfact *= z;
    out.push_back(ErlangComponent{
        zeta_coeff(f, z) * zfact / std::pow(rate, z + 1), z + 1, rate});
  }
  return out;
}

double channel_power_ccdf(const FadingParams& f, double h) {
  if (h < 0.0) throw std::domain_error("channel_power_ccdf: h must be >= 0");
  const double rate = f.beta() - f.c_fad();
  const auto mix = erlang_mixture_weights(f);
  // Erlang(k, rate) CCDF = e^{-rate h} sum_{v<k} (rate h)^v / v!
  const double x = rate * h;
  double ccdf = 0.0;
  double partial = 1.0;  // running sum_{v<=z} x^v/v!
  double term = 1.0;
  for (int z = 0; z < f.m(); ++z) {
    if (z >= 1) {
      term *= x / z;
      partial += term;
    }
    ccdf += mix[z].weight * partial;
  }
  return std::exp(-x) * ccdf;
}

double channel_power_pdf(const FadingParams& f, double h) {
  if (h < 0.0) return 0.0;
  const double rate = f.beta() - f.c_fad();
  double sum = 0.0;
  double hz = 1.0;
  for (int z = 0; z < f.m(); ++z) {
    sum += zeta_coeff(f, z) * hz;
    hz *= h;
  }
  return sum * std::exp(-rate * h);
}

double channel_amplitude_pdf(const FadingParams& f, double x) {
  if (x < 0.0) return 0.0;
  const int m = f.m();
  const double b = f.b();
  const double omega = f.omega();
  const double arg = omega * x * x / (2.0 * b * (2.0 * b * m + omega));
  return std::pow(2.0 * b * m / (2.0 * b * m + omega), m) * (x / b) *
         std::exp(-x * x / (2.0 * b)) * confluent_1f1(m, 1.0, arg);
}

double confluent_1f1(double a, double b, double x) {
  if (b <= 0.0 && b == std::floor(b))
    throw std::domain_error("confluent_1f1: b must not be a nonpositive integer");
  double sum = 1.0;
  double term = 1.0;
  int small_streak = 0;
  constexpr int kMaxIter = 10000;
  for (int k = 0; k < kMaxIter; ++k) {
    term *= (a + k) * x / ((b + k) * (k + 1));
    sum += term;
    // Two consecutive negligible terms guard against alternating-series
    // cancellation fooling a single-term check.
    small_streak = (std::abs(term) <= 1e-12 * std::abs(sum)) ? small_streak + 1 : 0;
    if (small_streak >= 2) return sum;
  }
  throw std::runtime_error("confluent_1f1: series did not converge");
}

}  // namespace satcov
