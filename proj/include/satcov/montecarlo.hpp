#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "satcov/geometry.hpp"
#include "satcov/interference.hpp"
#include "satcov/special.hpp"

namespace satcov {

enum class SampleMode { sphere, ring };

/// Distances from the ground station to the visible satellites, sorted
/// ascending, in meters.
struct ConstellationSample {
  std::vector<double> visible_distances_m;
  int total_visible;
  SampleMode mode;
};

using Rng = std::mt19937_64;

/// Per-trial substream: trial i gets an independent deterministic stream
/// derived from (master_seed, i), so parallel runs reproduce exactly.
Rng make_trial_rng(std::uint64_t master_seed, std::uint64_t trial);

ConstellationSample sample_constellation(const SphereGeometry& geom,
                                         double lambda_per_km2,
                                         SampleMode mode, Rng& rng);

/// One draw of the channel power H from the Erlang mixture.
double sample_channel_power(const FadingParams& fading, Rng& rng);

struct SinrRealization {
  double sinr;   // NaN when no satellite is visible
  double delta;  // NaN when undefined (fewer visible than needed)
  int visible;
};

SinrRealization realize_sinr(const ConstellationSample& sample,
                             const LinkBudget& budget,
                             const FadingParams& fading, int k, Rng& rng);

struct McEstimate {
  double value;
  long trials;
  double half_width_95;
};

struct McParams {
  SphereGeometry geom;
  double lambda_per_km2;
  LinkBudget budget;
  FadingParams fading;
  int k;
  SampleMode mode = SampleMode::ring;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct DeltaCondition {
  double center;
  double halfwidth = 0.01;
};

struct CoverageEstimates {
  std::vector<McEstimate> per_gamma;
  long raw_trials = 0;
  long conditioned_trials = 0;  // trials landing in the delta bin
  bool sufficient = true;       // false when the conditioned count is < 1000
};

/// Empirical exceedance frequencies over a gamma grid. Without a delta
/// condition this is the plain coverage frequency (zero-visibility trials
/// count as outage). With one, the branch-weighted conditional estimate:
/// the SNR branch is delta-free, the SINR branch is restricted to trials
/// whose relative distance falls inside the bin.
CoverageEstimates estimate_coverage(
    const McParams& params, const std::vector<double>& gamma_grid,
    long trials, const std::optional<DeltaCondition>& condition = {});

/// Empirical Laplace transform of interference-plus-noise beyond a fixed
/// Kth-nearest distance.
McEstimate mc_laplace(const RingGeometry& ring, const LinkBudget& budget,
                      const FadingParams& fading, double s, double rk_km,
                      long trials, std::uint64_t seed, int threads = 1);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<long> counts;   // per-bin counts
  long total = 0;
  bool sufficient = true;
};

struct DistanceStats {
  Histogram nearest_given_few;   // r1 | 1 <= count <= K-1        [km]
  Histogram kth_given_many;      // rK | count >= K, rK >= rmin/delta [km]
  Histogram delta_given_many;    // delta | count >= K
};

/// The Kth-distance histogram conditions on the support event
/// rK >= rmin/center, matching the analytic conditional law; the halfwidth
/// field is ignored here.
DistanceStats empirical_distance_stats(
    const McParams& params, long trials, int bins,
    const std::optional<DeltaCondition>& kth_delta_bin = {});

/// Pearson chi-square statistic of a histogram against an analytic density;
/// bins with expected count below 5 are merged. Returns {statistic, dof}.
std::pair<double, int> chi_square_statistic(
    const Histogram& hist, const std::function<double(double)>& pdf);

}  // namespace satcov
