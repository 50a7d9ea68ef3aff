#include "satcov/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace satcov {

namespace {

constexpr int kMaxClusterSize = 64;

void check_k(int k, int min_k) {
  if (k < min_k || k > kMaxClusterSize)
    throw std::domain_error("cluster size K out of supported range");
}

void check_delta(const RingGeometry& ring, double delta) {
  const double lo = ring.inner_radius_km / ring.outer_radius_km;
  if (!(delta >= lo * (1.0 - 1e-12) && delta <= 1.0 + 1e-12))
    throw std::domain_error("delta outside [r_min/r_max, 1]");
}

// Poisson mass exp(n log(mu) - lgamma(n+1) - mu), stable for large mu.
double poisson_pmf(double mu, int n) {
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mu) - std::lgamma(n + 1.0) - mu);
}

// Unnormalized joint "survival" sum of the Kth-nearest distance:
// S(r) = sum_{i<K} (a y)^i/i! * (e^{-a y} - e^{-M} T_i(r)),
// with y = r^2 - r_min^2, T_i = sum_{t<=K-1-i} (a u)^t/t!, u = r_max^2 - r^2.
double kth_survival_sum(const RingGeometry& ring, int k, double r) {
  const double a = ring.density_per_km2 * M_PI;
  const double y = r * r - ring.inner_radius_km * ring.inner_radius_km;
  const double u = ring.outer_radius_km * ring.outer_radius_km - r * r;
  const double big_m = a * (ring.outer_radius_km * ring.outer_radius_km -
                            ring.inner_radius_km * ring.inner_radius_km);
  const double emy = std::exp(-a * y);
  const double emm = std::exp(-big_m);

  double sum = 0.0;
  double pow_y = 1.0;  // (a y)^i / i!
  for (int i = 0; i < k; ++i) {
    if (i >= 1) pow_y *= a * y / i;
    double t_i = 1.0;
    double term = 1.0;
    for (int t = 1; t <= k - 1 - i; ++t) {
      term *= a * u / t;
      t_i += term;
    }
    sum += pow_y * (emy - emm * t_i);
  }
  return sum;
}

// d/dr of kth_survival_sum; the density is -S'(r)/S(r_min/delta).
// Differentiating S term by term, every e^{-M} contribution cancels in
// pairs and the e^{-a y} contributions telescope, leaving
//   S'(r) = -a 2r e^{-a y} (a y)^{K-1}/(K-1)!.
// The closed form matters: the term-by-term sum loses everything to
// cancellation once the density drops below ~1e-16 of the leading terms.
double kth_survival_sum_derivative(const RingGeometry& ring, int k, double r) {
  const double a = ring.density_per_km2 * M_PI;
  const double y = r * r - ring.inner_radius_km * ring.inner_radius_km;
  double pow_y = 1.0;  // (a y)^{K-1} / (K-1)!
  for (int i = 1; i < k; ++i) pow_y *= a * y / i;
  return -a * 2.0 * r * std::exp(-a * y) * pow_y;
}

}  // namespace

CountProbabilities count_probabilities(const RingGeometry& ring, int k) {
  check_k(k, 1);
  const double mu = ring.mean_count();
  const double p_zero = std::exp(-mu);
  double p_few = 0.0;
  for (int n = 1; n <= k - 1; ++n) p_few += poisson_pmf(mu, n);
  double p_geq = 1.0 - p_zero - p_few;
  if (p_geq < 0.0) p_geq = 0.0;
  return CountProbabilities{p_zero, p_few, p_geq};
}

double nearest_pdf_given_few(const RingGeometry& ring, int k, double r1_km) {
  check_k(k, 2);
  if (r1_km < ring.inner_radius_km || r1_km > ring.outer_radius_km) return 0.0;
  const double a = ring.density_per_km2 * M_PI;
  const double x = a * (ring.outer_radius_km * ring.outer_radius_km -
                        r1_km * r1_km);
  const double mu = a * (ring.outer_radius_km * ring.outer_radius_km -
                         ring.inner_radius_km * ring.inner_radius_km);
  double num = 0.0;
  double term = 1.0;  // x^{u-1} / (u-1)!
  for (int u = 1; u <= k - 1; ++u) {
    num += term;
    term *= x / u;
  }
  double den = 0.0;
  term = 1.0;
  for (int n = 1; n <= k - 1; ++n) {
    term *= mu / n;
    den += term;
  }
  return 2.0 * r1_km * a * num / den;
}

double nearest_pdf_given_some(const RingGeometry& ring, double r1_km) {
  if (r1_km < ring.inner_radius_km || r1_km > ring.outer_radius_km) return 0.0;
  const double a = ring.density_per_km2 * M_PI;
  const double mu = ring.mean_count();
  const double y = r1_km * r1_km - ring.inner_radius_km * ring.inner_radius_km;
  return 2.0 * a * r1_km * std::exp(-a * y) / (1.0 - std::exp(-mu));
}

double kth_normalizer(const RingGeometry& ring, int k, double delta) {
  check_k(k, 2);
  check_delta(ring, delta);
  return kth_survival_sum(ring, k, ring.inner_radius_km / delta);
}

double kth_pdf_given_many(const RingGeometry& ring, int k, double delta,
                          double rk_km) {
  check_k(k, 2);
  check_delta(ring, delta);
  if (rk_km < ring.inner_radius_km / delta || rk_km > ring.outer_radius_km)
    return 0.0;
  const double v = kth_normalizer(ring, k, delta);
  return -kth_survival_sum_derivative(ring, k, rk_km) / v;
}

double kth_ccdf_given_many(const RingGeometry& ring, int k, double delta,
                           double rk_km) {
  check_k(k, 2);
  check_delta(ring, delta);
  if (rk_km <= ring.inner_radius_km / delta) return 1.0;
  if (rk_km >= ring.outer_radius_km) return 0.0;
  const double v = kth_normalizer(ring, k, delta);
  double c = kth_survival_sum(ring, k, rk_km) / v;
  if (c < 0.0) c = 0.0;
  if (c > 1.0) c = 1.0;
  return c;
}

double delta_pdf(const RingGeometry& ring, int k, double x) {
  check_k(k, 2);
  const double lo = ring.inner_radius_km / ring.outer_radius_km;
  if (x < lo || x > 1.0) return 0.0;
  const double a = ring.density_per_km2 * M_PI;
  const double rmin2 = ring.inner_radius_km * ring.inner_radius_km;
  const double rmax2 = ring.outer_radius_km * ring.outer_radius_km;
  const double q1 = a * rmin2 / (x * x);
  const double q2 = a * rmax2;

  // e^{a rmin^2} Gamma(K, q) = (K-1)! e^{a rmin^2 - q} sum_{v<K} q^v/v!
  auto scaled_gamma = [&](double q) {
    double s = 1.0;
    double t = 1.0;
    for (int vv = 1; vv < k; ++vv) {
      t *= q / vv;
      s += t;
    }
    return std::exp(a * rmin2 - q) * s;
  };
  double km1_fact = 1.0;
  for (int i = 2; i <= k - 1; ++i) km1_fact *= i;
  double km2_fact = 1.0;
  for (int i = 2; i <= k - 2; ++i) km2_fact *= i;

  const double p_geq = count_probabilities(ring, k).p_geq_k;
  const double bracket = km1_fact * (scaled_gamma(q1) - scaled_gamma(q2));
  return 2.0 * x * std::pow(1.0 - x * x, k - 2) * bracket / (km2_fact * p_geq);
}

double joint_pdf_d1_dk(const RingGeometry& ring, int k, double r1_km,
                       double rk_km) {
  check_k(k, 2);
  if (r1_km < ring.inner_radius_km || rk_km > ring.outer_radius_km ||
      r1_km > rk_km)
    return 0.0;
  const double a = ring.density_per_km2 * M_PI;
  const double rmin2 = ring.inner_radius_km * ring.inner_radius_km;
  double km2_fact = 1.0;
  for (int i = 2; i <= k - 2; ++i) km2_fact *= i;
  const double p_geq = count_probabilities(ring, k).p_geq_k;
  return 4.0 * std::pow(a, k) * r1_km * rk_km *
         std::pow(rk_km * rk_km - r1_km * r1_km, k - 2) *
         std::exp(-a * (rk_km * rk_km - rmin2)) / (km2_fact * p_geq);
}

}  // namespace satcov
