#pragma once

#include <span>
#include <vector>

#include "satcov/distributions.hpp"
#include "satcov/geometry.hpp"
#include "satcov/interference.hpp"
#include "satcov/special.hpp"

namespace satcov {

/// Coverage probability with its branch decomposition over the
/// visible-count events.
struct CoverageResult {
  double probability;
  double few_branch;    // P[SNR >= gamma | 1 <= count <= K-1]
  double many_branch;   // P[SINR >= gamma | count >= K, delta]
  double weight_few;    // P[1 <= count <= K-1]
  double weight_many;   // P[count >= K]
};

/// Quadrature tolerances of the coverage integrals. Defaults match the
/// analysis paths; the spectral-efficiency sweep loosens them.
struct QuadBudget {
  double outer_rel = 1e-6;   // delta-marginalizing integral
  double inner_rel = 1e-7;   // serving-distance integral
  long max_inner_evals = 650000;  // ~1e7 innermost evaluations
};

/// SNR coverage when all visible satellites are in the cluster (count
/// between 1 and K-1); interferers are nulled, noise only.
double snr_coverage_few(const RingGeometry& ring, const LinkBudget& budget,
                        const FadingParams& fading, int k, double gamma,
                        const QuadBudget& qb = {});

/// SINR coverage conditioned on count >= K and relative distance delta.
double sinr_coverage_many(const RingGeometry& ring, const LinkBudget& budget,
                          const FadingParams& fading, int k, double delta,
                          double gamma, const QuadBudget& qb = {});

/// Per-order tight kappa values ((z+1)!)^{-1/(z+1)}, z = 0..m-1.
std::vector<double> kappa_tight(int m);

/// Approximate SINR coverage (binomial expansion of the two-sided
/// exponential channel bound); kappa_per_z supplies one kappa per mixture
/// order. Exact when m = 1.
double sinr_coverage_many_approx(const RingGeometry& ring,
                                 const LinkBudget& budget,
                                 const FadingParams& fading, int k,
                                 double delta, double gamma,
                                 std::span<const double> kappa_per_z,
                                 const QuadBudget& qb = {});
double sinr_coverage_many_approx(const RingGeometry& ring,
                                 const LinkBudget& budget,
                                 const FadingParams& fading, int k,
                                 double delta, double gamma, double kappa,
                                 const QuadBudget& qb = {});

/// Conditional coverage given delta: count-weighted mix of the SNR and SINR
/// branches (the zero-count branch contributes nothing).
CoverageResult coverage_cond_delta(const RingGeometry& ring,
                                   const LinkBudget& budget,
                                   const FadingParams& fading, int k,
                                   double delta, double gamma,
                                   const QuadBudget& qb = {});

CoverageResult coverage_cond_delta_approx(const RingGeometry& ring,
                                          const LinkBudget& budget,
                                          const FadingParams& fading, int k,
                                          double delta, double gamma,
                                          std::span<const double> kappa_per_z,
                                          const QuadBudget& qb = {});

/// Coverage marginalized over the relative-distance distribution. K >= 2.
CoverageResult coverage_marginal(const RingGeometry& ring,
                                 const LinkBudget& budget,
                                 const FadingParams& fading, int k,
                                 double gamma, const QuadBudget& qb = {});

/// Non-coordinated baseline: serve the nearest satellite, interference from
/// everything beyond it.
CoverageResult coverage_single(const RingGeometry& ring,
                               const LinkBudget& budget,
                               const FadingParams& fading, double gamma,
                               const QuadBudget& qb = {});

/// Dispatch: K = 1 baseline or delta-marginalized coverage.
CoverageResult coverage(const RingGeometry& ring, const LinkBudget& budget,
                        const FadingParams& fading, int k, double gamma,
                        const QuadBudget& qb = {});

/// P[W log2(1 + SINR) >= rate] via the threshold map 2^(rate/W) - 1.
double rate_coverage(const RingGeometry& ring, const LinkBudget& budget,
                     const FadingParams& fading, int k, double rate_bps,
                     double bandwidth_hz, const QuadBudget& qb = {});

/// Ergodic spectral efficiency: integral of the coverage curve against
/// log2(e)/(1+gamma), with a bounded truncation tail.
double ergodic_se(const RingGeometry& ring, const LinkBudget& budget,
                  const FadingParams& fading, int k,
                  double se_rel_tol = 1e-5);

struct ClusterSweepEntry {
  int k;
  double se;
};

/// Ergodic SE for every K in 1..N_t (budget rebuilt per K).
std::vector<ClusterSweepEntry> ergodic_se_sweep(const RingGeometry& ring,
                                                const RadioConfig& radio,
                                                const FadingParams& fading,
                                                double se_rel_tol = 1e-5);

struct OptimalCluster {
  int k_star;
  double se;
};

/// argmax_K of the ergodic SE; ties break toward smaller K.
OptimalCluster optimal_cluster_size(const RingGeometry& ring,
                                    const RadioConfig& radio,
                                    const FadingParams& fading,
                                    double se_rel_tol = 1e-5);

}  // namespace satcov
