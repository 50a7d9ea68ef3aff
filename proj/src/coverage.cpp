#include "satcov/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "satcov/quadrature.hpp"
#include "satcov/units.hpp"

namespace satcov {

namespace {

constexpr double kLog2E = 1.4426950408889634;

// The 1 - sum brackets below bottom out in roundoff noise near 1e-16.
// Snapping that noise to an exact zero keeps the adaptive quadratures from
// chasing it to full depth; the introduced error is below every tolerance.
double snap_to_zero(double x) { return std::abs(x) < 1e-14 ? 0.0 : x; }

// Theorem-style inner bracket of the SINR branch at a fixed serving
// distance: 1 - sum_z w_z (1 - sum_{v<=z} s0^v/v! (-1)^v L^(v)(s0)).
double many_bracket(const InterferenceLaplace& lap,
                    const std::vector<ErlangComponent>& mix, double rate,
                    double alpha, double gamma, double serving_m,
                    double rk_km) {
  const int m = static_cast<int>(mix.size());
  const double s0 = rate * gamma * std::pow(serving_m, alpha);
  const auto l = lap.derivatives(m - 1, s0, rk_km);
  // 1 - sum_z w_z (1 - prefix_z) = sum_z w_z prefix_z since the weights sum
  // to 1; the latter form is free of the 1 - (1 - tiny) cancellation.
  double sum = 0.0;
  double prefix = 0.0;
  double sv = 1.0;  // s0^v / v!
  for (int z = 0; z < m; ++z) {
    if (z >= 1) sv *= s0 / z;
    prefix += sv * ((z % 2 == 0) ? 1.0 : -1.0) * l[z];
    sum += mix[z].weight * prefix;
  }
  return snap_to_zero(sum);
}

double many_bracket_approx(const InterferenceLaplace& lap,
                           const std::vector<ErlangComponent>& mix,
                           double rate, double alpha, double gamma,
                           double serving_m, double rk_km,
                           std::span<const double> kappa_per_z) {
  const int m = static_cast<int>(mix.size());
  const double base = rate * gamma * std::pow(serving_m, alpha);
  // 1 - sum_z w_z sum_l C(z+1,l)(-1)^l L(l kappa ...): the l = 0 term of
  // each inner sum is 1 and the weights sum to 1, so dropping that term and
  // negating removes the leading cancellation.
  double sum = 0.0;
  for (int z = 0; z < m; ++z) {
    double inner = 0.0;
    double binom = static_cast<double>(z + 1);  // C(z+1, l) from l = 1
    for (int l = 1; l <= z + 1; ++l) {
      const double s = l * kappa_per_z[z] * base;
      inner += binom * ((l % 2 == 0) ? 1.0 : -1.0) * lap.value(s, rk_km);
      binom *= static_cast<double>(z + 1 - l) / (l + 1);
    }
    sum += mix[z].weight * inner;
  }
  return snap_to_zero(-sum);
}

void validate_kappa(std::span<const double> kappa_per_z) {
  for (size_t z = 0; z < kappa_per_z.size(); ++z) {
    const double lower = std::pow(std::tgamma(z + 2.0), -1.0 / (z + 1.0));
    if (!(kappa_per_z[z] >= lower * (1.0 - 1e-12) &&
          kappa_per_z[z] <= 1.0 + 1e-12))
      throw std::domain_error("kappa outside [((z+1)!)^{-1/(z+1)}, 1]");
  }
}

// The SINR brackets decay like exp(-const * rk^alpha) with the maximum at
// the lower end of the serving-distance range; a few probes give a reliable
// scale estimate.
template <class F>
double bracket_scale(F&& bracket, double lo, double hi) {
  double peak = 0.0;
  for (double frac : {0.0, 0.01, 0.1, 0.5, 1.0})
    peak = std::max(peak, std::abs(bracket(lo + frac * (hi - lo))));
  return peak;
}

// Upper integration limit trimmed to where f has decayed below a floor that
// is negligible next to the integral; without the trim the quadrature
// spends its subdivision depth resolving mass that cannot move any result.
template <class F>
double trim_upper(F&& f, double lo, double hi, double floor_val) {
  if (std::abs(f(hi)) >= floor_val) return hi;
  double a = lo;
  double b = hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (a + b);
    (std::abs(f(mid)) >= floor_val ? a : b) = mid;
  }
  return b;
}

// The serving-distance pdf can concentrate far past where the bracket has
// already decayed, leaving an integral at roundoff level; the adaptive
// quadrature then burns its full depth on the snapped-to-zero step. Probe a
// grid and skip integrals whose crude bound cannot move any reported value.
template <class F>
bool negligible_integral(F&& f, double lo, double hi) {
  double peak = 0.0;
  for (int i = 0; i <= 16; ++i)
    peak = std::max(peak, std::abs(f(lo + i * (hi - lo) / 16.0)));
  return peak * (hi - lo) < 1e-17;
}

struct EvalCounter {
  long count = 0;
  long cap;
  explicit EvalCounter(long c) : cap(c) {}
  void tick() {
    if (++count > cap)
      throw QuadratureError("nested quadrature budget exceeded");
  }
};

double many_integral(const RingGeometry& ring, const LinkBudget& budget,
                     const FadingParams& fading, int k, double delta,
                     double gamma, const QuadBudget& qb,
                     EvalCounter& evals) {
  if (gamma <= 0.0) return 1.0;
  const InterferenceLaplace lap(ring, budget, fading);
  const auto mix = erlang_mixture_weights(fading);
  const double rate = fading.beta() - fading.c_fad();
  const double lo = ring.inner_radius_km / delta;
  auto bracket = [&](double rk) {
    return many_bracket(lap, mix, rate, budget.path_loss_exponent, gamma,
                        delta * rk * kKmToM, rk);
  };
  const double peak = bracket_scale(bracket, lo, ring.outer_radius_km);
  if (peak < 1e-12) return 0.0;
  // The floor stays above the snap threshold so the step the snap introduces
  // lies outside the integration range; the mass dropped is below 2e-14.
  const double hi = trim_upper(bracket, lo, ring.outer_radius_km,
                               std::max(1e-9 * peak, 2e-14));
  auto weighted = [&](double rk) {
    return bracket(rk) * kth_pdf_given_many(ring, k, delta, rk);
  };
  if (negligible_integral(weighted, lo, hi)) return 0.0;
  auto integrand = [&](double rk) {
    evals.tick();
    return weighted(rk);
  };
  return integrate(integrand, lo, hi, qb.inner_rel, 1e-12);
}

}  // namespace

double snr_coverage_few(const RingGeometry& ring, const LinkBudget& budget,
                        const FadingParams& fading, int k, double gamma,
                        const QuadBudget& qb) {
  if (k < 2) throw std::domain_error("snr_coverage_few requires K >= 2");
  if (gamma <= 0.0) return 1.0;
  const double sigma_bar2 = budget.normalized_noise();
  const double alpha = budget.path_loss_exponent;
  auto integrand = [&](double r1) {
    const double r1_m = r1 * kKmToM;
    return channel_power_ccdf(fading, gamma * std::pow(r1_m, alpha) *
                                          sigma_bar2) *
           nearest_pdf_given_few(ring, k, r1);
  };
  return integrate(integrand, ring.inner_radius_km, ring.outer_radius_km,
                   qb.inner_rel, 1e-12);
}

double sinr_coverage_many(const RingGeometry& ring, const LinkBudget& budget,
                          const FadingParams& fading, int k, double delta,
                          double gamma, const QuadBudget& qb) {
  if (k < 2) throw std::domain_error("sinr_coverage_many requires K >= 2");
  EvalCounter evals(qb.max_inner_evals);
  return many_integral(ring, budget, fading, k, delta, gamma, qb, evals);
}

std::vector<double> kappa_tight(int m) {
  std::vector<double> out(m);
  for (int z = 0; z < m; ++z)
    out[z] = std::pow(std::tgamma(z + 2.0), -1.0 / (z + 1.0));
  return out;
}

double sinr_coverage_many_approx(const RingGeometry& ring,
                                 const LinkBudget& budget,
                                 const FadingParams& fading, int k,
                                 double delta, double gamma,
                                 std::span<const double> kappa_per_z,
                                 const QuadBudget& qb) {
  if (k < 2) throw std::domain_error("sinr_coverage_many_approx requires K >= 2");
  if (static_cast<int>(kappa_per_z.size()) != fading.m())
    throw std::domain_error("kappa_per_z must have one entry per mixture order");
  validate_kappa(kappa_per_z);
  if (gamma <= 0.0) return 1.0;
  const InterferenceLaplace lap(ring, budget, fading);
  const auto mix = erlang_mixture_weights(fading);
  const double rate = fading.beta() - fading.c_fad();
  const double lo = ring.inner_radius_km / delta;
  EvalCounter evals(qb.max_inner_evals);
  auto bracket = [&](double rk) {
    return many_bracket_approx(lap, mix, rate, budget.path_loss_exponent,
                               gamma, delta * rk * kKmToM, rk, kappa_per_z);
  };
  const double peak = bracket_scale(bracket, lo, ring.outer_radius_km);
  if (peak < 1e-12) return 0.0;
  const double hi = trim_upper(bracket, lo, ring.outer_radius_km,
                               std::max(1e-9 * peak, 2e-14));
  auto weighted = [&](double rk) {
    return bracket(rk) * kth_pdf_given_many(ring, k, delta, rk);
  };
  if (negligible_integral(weighted, lo, hi)) return 0.0;
  auto integrand = [&](double rk) {
    evals.tick();
    return weighted(rk);
  };
  return integrate(integrand, lo, hi, qb.inner_rel, 1e-12);
}

double sinr_coverage_many_approx(const RingGeometry& ring,
                                 const LinkBudget& budget,
                                 const FadingParams& fading, int k,
                                 double delta, double gamma, double kappa,
                                 const QuadBudget& qb) {
  // Per-order brackets tighten as z grows; clamp the scalar into each one.
  // The z = 0 bracket is degenerate at 1, which is what makes the m = 1
  // approximation exact.
  std::vector<double> per_z(fading.m());
  for (int z = 0; z < fading.m(); ++z) {
    const double lower = std::pow(std::tgamma(z + 2.0), -1.0 / (z + 1.0));
    per_z[z] = std::clamp(kappa, lower, 1.0);
  }
  return sinr_coverage_many_approx(ring, budget, fading, k, delta, gamma,
                                   std::span<const double>(per_z), qb);
}

CoverageResult coverage_cond_delta(const RingGeometry& ring,
                                   const LinkBudget& budget,
                                   const FadingParams& fading, int k,
                                   double delta, double gamma,
                                   const QuadBudget& qb) {
  const auto counts = count_probabilities(ring, k);
  const double few = snr_coverage_few(ring, budget, fading, k, gamma, qb);
  const double many =
      sinr_coverage_many(ring, budget, fading, k, delta, gamma, qb);
  return CoverageResult{counts.p_one_to_km1 * few + counts.p_geq_k * many,
                        few, many, counts.p_one_to_km1, counts.p_geq_k};
}

CoverageResult coverage_cond_delta_approx(const RingGeometry& ring,
                                          const LinkBudget& budget,
                                          const FadingParams& fading, int k,
                                          double delta, double gamma,
                                          std::span<const double> kappa_per_z,
                                          const QuadBudget& qb) {
  const auto counts = count_probabilities(ring, k);
  const double few = snr_coverage_few(ring, budget, fading, k, gamma, qb);
  const double many = sinr_coverage_many_approx(ring, budget, fading, k,
                                                delta, gamma, kappa_per_z, qb);
  return CoverageResult{counts.p_one_to_km1 * few + counts.p_geq_k * many,
                        few, many, counts.p_one_to_km1, counts.p_geq_k};
}

CoverageResult coverage_marginal(const RingGeometry& ring,
                                 const LinkBudget& budget,
                                 const FadingParams& fading, int k,
                                 double gamma, const QuadBudget& qb) {
  if (k < 2) throw std::domain_error("coverage_marginal requires K >= 2");
  const auto counts = count_probabilities(ring, k);
  const double few = snr_coverage_few(ring, budget, fading, k, gamma, qb);
  double many = 1.0;
  // A vanishing cluster-complete weight caps the branch contribution below
  // every tolerance, and the conditional distributions degrade numerically
  // in exactly that regime; skip the integral there.
  if (counts.p_geq_k < 1e-9) {
    many = 0.0;
  } else if (gamma > 0.0) {
    EvalCounter evals(qb.max_inner_evals);
    const double lo = ring.inner_radius_km / ring.outer_radius_km;
    auto outer = [&](double x) {
      const double fx = delta_pdf(ring, k, x);
      if (fx < 1e-15) return 0.0;
      return fx * many_integral(ring, budget, fading, k, x, gamma, qb, evals);
    };
    many = integrate(outer, lo, 1.0, qb.outer_rel, 1e-12);
  }
  return CoverageResult{counts.p_one_to_km1 * few + counts.p_geq_k * many,
                        few, many, counts.p_one_to_km1, counts.p_geq_k};
}

CoverageResult coverage_single(const RingGeometry& ring,
                               const LinkBudget& budget,
                               const FadingParams& fading, double gamma,
                               const QuadBudget& qb) {
  const double p_some = 1.0 - std::exp(-ring.mean_count());
  double many = 1.0;
  if (gamma > 0.0) {
    const InterferenceLaplace lap(ring, budget, fading);
    const auto mix = erlang_mixture_weights(fading);
    const double rate = fading.beta() - fading.c_fad();
    EvalCounter evals(qb.max_inner_evals);
    auto bracket = [&](double r1) {
      return many_bracket(lap, mix, rate, budget.path_loss_exponent, gamma,
                          r1 * kKmToM, r1);
    };
    const double peak = bracket_scale(bracket, ring.inner_radius_km,
                                      ring.outer_radius_km);
    if (peak < 1e-12) {
      many = 0.0;
    } else {
      const double hi = trim_upper(bracket, ring.inner_radius_km,
                                   ring.outer_radius_km,
                                   std::max(1e-9 * peak, 2e-14));
      auto weighted = [&](double r1) {
        return bracket(r1) * nearest_pdf_given_some(ring, r1);
      };
      if (negligible_integral(weighted, ring.inner_radius_km, hi)) {
        many = 0.0;
      } else {
        auto integrand = [&](double r1) {
          evals.tick();
          return weighted(r1);
        };
        many = integrate(integrand, ring.inner_radius_km, hi, qb.inner_rel,
                         1e-12);
      }
    }
  }
  return CoverageResult{p_some * many, 0.0, many, 0.0, p_some};
}

CoverageResult coverage(const RingGeometry& ring, const LinkBudget& budget,
                        const FadingParams& fading, int k, double gamma,
                        const QuadBudget& qb) {
  return k == 1 ? coverage_single(ring, budget, fading, gamma, qb)
                : coverage_marginal(ring, budget, fading, k, gamma, qb);
}

double rate_coverage(const RingGeometry& ring, const LinkBudget& budget,
                     const FadingParams& fading, int k, double rate_bps,
                     double bandwidth_hz, const QuadBudget& qb) {
  if (rate_bps < 0.0) throw std::domain_error("rate must be nonnegative");
  if (!(bandwidth_hz > 0.0))
    throw std::domain_error("bandwidth must be positive");
  const double gamma = std::exp2(rate_bps / bandwidth_hz) - 1.0;
  return coverage(ring, budget, fading, k, gamma, qb).probability;
}

double ergodic_se(const RingGeometry& ring, const LinkBudget& budget,
                  const FadingParams& fading, int k, double se_rel_tol) {
  const QuadBudget qb{1e-4, 1e-5, 650000};
  auto cov = [&](double gamma) {
    return coverage(ring, budget, fading, k, gamma, qb).probability;
  };
  double gamma_max = 1.0;
  double cov_at_max = cov(gamma_max);
  while (cov_at_max >= 1e-6) {
    gamma_max *= 10.0;
    if (gamma_max > 1e15)
      throw std::runtime_error("ergodic_se: coverage tail does not decay");
    cov_at_max = cov(gamma_max);
  }
  const double tail_bound = cov_at_max * kLog2E *
                            std::log((1.0 + 10.0 * gamma_max) /
                                     (1.0 + gamma_max));
  if (tail_bound > 1e-5)
    throw std::runtime_error("ergodic_se: tail bound exceeds budget");
  // Substitute t = log(1 + gamma): C = log2(e) * int_0^T cov(e^t - 1) dt.
  auto integrand = [&](double t) { return cov(std::expm1(t)); };
  return kLog2E *
         integrate(integrand, 0.0, std::log1p(gamma_max), se_rel_tol, 1e-9, 12);
}

std::vector<ClusterSweepEntry> ergodic_se_sweep(const RingGeometry& ring,
                                                const RadioConfig& radio,
                                                const FadingParams& fading,
                                                double se_rel_tol) {
  if (radio.n_t < 1) throw std::domain_error("N_t must be >= 1");
  std::vector<ClusterSweepEntry> out;
  out.reserve(radio.n_t);
  for (int k = 1; k <= radio.n_t; ++k)
    out.push_back(
        {k, ergodic_se(ring, radio.link_budget(k), fading, k, se_rel_tol)});
  return out;
}

OptimalCluster optimal_cluster_size(const RingGeometry& ring,
                                    const RadioConfig& radio,
                                    const FadingParams& fading,
                                    double se_rel_tol) {
  const auto sweep = ergodic_se_sweep(ring, radio, fading, se_rel_tol);
  OptimalCluster best{sweep.front().k, sweep.front().se};
  for (const auto& entry : sweep)
    if (entry.se > best.se) best = {entry.k, entry.se};
  return best;
}

}  // namespace satcov
