#include "satcov/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "satcov/quadrature.hpp"
#include "satcov/units.hpp"

namespace satcov {

namespace {

constexpr long kChunkSize = 8192;
constexpr long kMinConditioned = 1000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs fn(chunk, begin, end) over fixed-size trial chunks. Chunk results are
// written into per-chunk slots and reduced in chunk order by the caller, so
// the outcome is independent of the worker count.
template <class F>
void parallel_chunks(long trials, int threads, F&& fn) {
  const long nchunks = (trials + kChunkSize - 1) / kChunkSize;
  std::atomic<long> next{0};
  auto worker = [&] {
    long c;
    while ((c = next.fetch_add(1)) < nchunks)
      fn(c, c * kChunkSize, std::min(trials, (c + 1) * kChunkSize));
  };
  const int t = std::max(1, threads);
  if (t == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double exponential_draw(double rate, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  return -std::log1p(-uni(rng)) / rate;
}

// Interference sum over satellites ranked after the cluster.
double interference_sum(const ConstellationSample& sample,
                        const LinkBudget& budget, const FadingParams& fading,
                        int first_interferer, Rng& rng) {
  double acc = 0.0;
  for (size_t i = first_interferer; i < sample.visible_distances_m.size();
       ++i) {
    const double h = sample_channel_power(fading, rng);
    acc += budget.interferer_gain_ratio * h *
           std::pow(sample.visible_distances_m[i],
                    -budget.path_loss_exponent);
  }
  return acc;
}

Histogram make_histogram(double lo, double hi, int bins) {
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i)
    h.edges[i] = lo + (hi - lo) * i / bins;
  h.counts.assign(bins, 0);
  return h;
}

void histogram_add(Histogram& h, double x) {
  const double lo = h.edges.front();
  const double hi = h.edges.back();
  if (x < lo || x > hi) return;
  int bin = static_cast<int>((x - lo) / (hi - lo) * h.counts.size());
  bin = std::clamp<int>(bin, 0, static_cast<int>(h.counts.size()) - 1);
  ++h.counts[bin];
  ++h.total;
}

}  // namespace

Rng make_trial_rng(std::uint64_t master_seed, std::uint64_t trial) {
  return Rng(splitmix64(splitmix64(master_seed) ^ trial));
}

ConstellationSample sample_constellation(const SphereGeometry& geom,
                                         double lambda_per_km2,
                                         SampleMode mode, Rng& rng) {
  ConstellationSample out;
  out.mode = mode;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  if (mode == SampleMode::sphere) {
    const double rs = geom.orbit_radius();
    const double re = geom.earth_radius();
    const double z_cut = re + geom.min_visibility_altitude();
    std::poisson_distribution<long> count(4.0 * lambda_per_km2 * M_PI * rs *
                                          rs);
    const long n = count(rng);
    for (long i = 0; i < n; ++i) {
      const double z = rs * (2.0 * uni(rng) - 1.0);
      if (z < z_cut) continue;
      out.visible_distances_m.push_back(
          std::sqrt(rs * rs + re * re - 2.0 * re * z) * kKmToM);
    }
  } else {
    const RingGeometry ring = to_ring(geom, lambda_per_km2);
    std::poisson_distribution<long> count(ring.mean_count());
    const long n = count(rng);
    const double rmin2 = ring.inner_radius_km * ring.inner_radius_km;
    const double rmax2 = ring.outer_radius_km * ring.outer_radius_km;
    for (long i = 0; i < n; ++i)
      out.visible_distances_m.push_back(
          std::sqrt(rmin2 + uni(rng) * (rmax2 - rmin2)) * kKmToM);
  }
  std::sort(out.visible_distances_m.begin(), out.visible_distances_m.end());
  out.total_visible = static_cast<int>(out.visible_distances_m.size());
  return out;
}

double sample_channel_power(const FadingParams& fading, Rng& rng) {
  static thread_local const FadingParams* cached_params = nullptr;
  static thread_local std::vector<ErlangComponent> cached_mix;
  // Mixture weights depend only on the parameters; rebuild on change.
  if (cached_params != &fading) {
    cached_mix = erlang_mixture_weights(fading);
    cached_params = &fading;
  }
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double u = uni(rng);
  int z = 0;
  for (; z < static_cast<int>(cached_mix.size()) - 1; ++z) {
    u -= cached_mix[z].weight;
    if (u <= 0.0) break;
  }
  double h = 0.0;
  for (int i = 0; i < cached_mix[z].shape; ++i)
    h += exponential_draw(cached_mix[z].rate, rng);
  return h;
}

SinrRealization realize_sinr(const ConstellationSample& sample,
                             const LinkBudget& budget,
                             const FadingParams& fading, int k, Rng& rng) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const int n = sample.total_visible;
  if (n == 0) return {nan, nan, 0};
  const double alpha = budget.path_loss_exponent;
  const double sigma_bar2 = budget.normalized_noise();
  const double d1 = sample.visible_distances_m.front();
  const double h1 = sample_channel_power(fading, rng);
  const double desired = h1 * std::pow(d1, -alpha);

  // Relative distance: d1/dK, or d1/d2 for the non-coordinated baseline.
  const int delta_idx = (k == 1) ? 1 : k - 1;
  const double delta = (n > delta_idx)
                           ? d1 / sample.visible_distances_m[delta_idx]
                           : nan;

  if (n <= k - 1) return {desired / sigma_bar2, delta, n};
  const double interference =
      interference_sum(sample, budget, fading, k, rng);
  return {desired / (interference + sigma_bar2), delta, n};
}

CoverageEstimates estimate_coverage(
    const McParams& params, const std::vector<double>& gamma_grid,
    long trials, const std::optional<DeltaCondition>& condition) {
  if (trials < 1000) throw std::invalid_argument("need at least 1000 trials");
  const size_t ng = gamma_grid.size();
  const int k = params.k;
  // For the K = 1 baseline, delta conditioning keys on the second-nearest
  // distance, so the interference-free event is exactly one visible.
  const int many_threshold = std::max(k, 2);

  struct ChunkAcc {
    std::vector<long> covered;   // unconditioned mode
    std::vector<long> few_cov;   // conditioned mode
    std::vector<long> many_cov;
    long few_total = 0;
    long geq_total = 0;
    long bin_total = 0;
  };
  const long nchunks = (trials + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkAcc> acc(nchunks);

  parallel_chunks(trials, params.threads, [&](long chunk, long b, long e) {
    ChunkAcc& a = acc[chunk];
    a.covered.assign(ng, 0);
    a.few_cov.assign(ng, 0);
    a.many_cov.assign(ng, 0);
    for (long i = b; i < e; ++i) {
      Rng rng = make_trial_rng(params.seed, static_cast<std::uint64_t>(i));
      const auto sample = sample_constellation(params.geom,
                                               params.lambda_per_km2,
                                               params.mode, rng);
      if (!condition) {
        const auto r = realize_sinr(sample, params.budget, params.fading, k,
                                    rng);
        for (size_t g = 0; g < ng; ++g)
          if (r.sinr >= gamma_grid[g]) ++a.covered[g];
        continue;
      }
      const int n = sample.total_visible;
      if (n == 0) continue;
      if (n < many_threshold) {
        ++a.few_total;
        const double h1 = sample_channel_power(params.fading, rng);
        const double snr =
            h1 * std::pow(sample.visible_distances_m.front(),
                          -params.budget.path_loss_exponent) /
            params.budget.normalized_noise();
        for (size_t g = 0; g < ng; ++g)
          if (snr >= gamma_grid[g]) ++a.few_cov[g];
        continue;
      }
      ++a.geq_total;
      const double delta = sample.visible_distances_m.front() /
                           sample.visible_distances_m[many_threshold - 1];
      if (std::abs(delta - condition->center) > condition->halfwidth)
        continue;
      ++a.bin_total;
      const double h1 = sample_channel_power(params.fading, rng);
      const double desired =
          h1 * std::pow(sample.visible_distances_m.front(),
                        -params.budget.path_loss_exponent);
      const double interference = interference_sum(
          sample, params.budget, params.fading, std::max(k, 1), rng);
      const double sinr =
          desired / (interference + params.budget.normalized_noise());
      for (size_t g = 0; g < ng; ++g)
        if (sinr >= gamma_grid[g]) ++a.many_cov[g];
    }
  });

  std::vector<long> covered(ng, 0), few_cov(ng, 0), many_cov(ng, 0);
  long few_total = 0, geq_total = 0, bin_total = 0;
  for (const auto& a : acc) {
    for (size_t g = 0; g < ng; ++g) {
      covered[g] += a.covered[g];
      few_cov[g] += a.few_cov[g];
      many_cov[g] += a.many_cov[g];
    }
    few_total += a.few_total;
    geq_total += a.geq_total;
    bin_total += a.bin_total;
  }

  CoverageEstimates out;
  out.raw_trials = trials;
  out.per_gamma.reserve(ng);
  if (!condition) {
    out.conditioned_trials = trials;
    for (size_t g = 0; g < ng; ++g) {
      const double p = static_cast<double>(covered[g]) / trials;
      out.per_gamma.push_back(
          {p, trials, 1.96 * std::sqrt(p * (1.0 - p) / trials)});
    }
    return out;
  }
  out.conditioned_trials = bin_total;
  out.sufficient = bin_total >= kMinConditioned;
  const double p_few = static_cast<double>(few_total) / trials;
  const double p_geq = static_cast<double>(geq_total) / trials;
  for (size_t g = 0; g < ng; ++g) {
    const double pf = few_total > 0
                          ? static_cast<double>(few_cov[g]) / few_total
                          : 0.0;
    const double pm = bin_total > 0
                          ? static_cast<double>(many_cov[g]) / bin_total
                          : 0.0;
    const double value = p_few * pf + p_geq * pm;
    double var = 0.0;
    if (few_total > 0) var += p_few * p_few * pf * (1.0 - pf) / few_total;
    if (bin_total > 0) var += p_geq * p_geq * pm * (1.0 - pm) / bin_total;
    out.per_gamma.push_back({value, bin_total, 1.96 * std::sqrt(var)});
  }
  return out;
}

McEstimate mc_laplace(const RingGeometry& ring, const LinkBudget& budget,
                      const FadingParams& fading, double s, double rk_km,
                      long trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const double sigma_bar2 = budget.normalized_noise();
  const double rk2 = rk_km * rk_km;
  const double rmax2 = ring.outer_radius_km * ring.outer_radius_km;
  const double mean_count = ring.density_per_km2 * M_PI * (rmax2 - rk2);

  struct ChunkAcc {
    double sum = 0.0;
    double sumsq = 0.0;
  };
  const long nchunks = (trials + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkAcc> acc(nchunks);

  parallel_chunks(trials, threads, [&](long chunk, long b, long e) {
    ChunkAcc& a = acc[chunk];
    for (long i = b; i < e; ++i) {
      Rng rng = make_trial_rng(seed, static_cast<std::uint64_t>(i));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      std::poisson_distribution<long> count(mean_count);
      const long n = count(rng);
      double interference = 0.0;
      for (long j = 0; j < n; ++j) {
        const double r_m =
            std::sqrt(rk2 + uni(rng) * (rmax2 - rk2)) * kKmToM;
        interference += budget.interferer_gain_ratio *
                        sample_channel_power(fading, rng) *
                        std::pow(r_m, -budget.path_loss_exponent);
      }
      const double x = std::exp(-s * (interference + sigma_bar2));
      a.sum += x;
      a.sumsq += x * x;
    }
  });

  double sum = 0.0, sumsq = 0.0;
  for (const auto& a : acc) {
    sum += a.sum;
    sumsq += a.sumsq;
  }
  const double mean = sum / trials;
  const double var = std::max(0.0, sumsq / trials - mean * mean);
  return {mean, trials, 1.96 * std::sqrt(var / trials)};
}

DistanceStats empirical_distance_stats(
    const McParams& params, long trials, int bins,
    const std::optional<DeltaCondition>& kth_delta_bin) {
  if (bins < 2) throw std::invalid_argument("need at least 2 bins");
  const double rmin = params.geom.r_min();
  const double rmax = params.geom.r_max();
  const int k = params.k;
  const int many_threshold = std::max(k, 2);
  // The analytic Kth-distance law conditions on the support event
  // dK >= rmin/delta, not on an exact delta; the histogram keeps exactly the
  // trials in that event and starts at the support edge so no bin straddles
  // the discontinuity.
  const double kth_lo = kth_delta_bin ? rmin / kth_delta_bin->center : rmin;

  struct ChunkAcc {
    Histogram nearest, kth, delta;
  };
  const long nchunks = (trials + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkAcc> acc(nchunks);

  parallel_chunks(trials, params.threads, [&](long chunk, long b, long e) {
    ChunkAcc& a = acc[chunk];
    a.nearest = make_histogram(rmin, rmax, bins);
    a.kth = make_histogram(kth_lo, rmax, bins);
    a.delta = make_histogram(rmin / rmax, 1.0, bins);
    for (long i = b; i < e; ++i) {
      Rng rng = make_trial_rng(params.seed, static_cast<std::uint64_t>(i));
      const auto sample = sample_constellation(params.geom,
                                               params.lambda_per_km2,
                                               params.mode, rng);
      const int n = sample.total_visible;
      if (n == 0) continue;
      const double r1_km = sample.visible_distances_m.front() / kKmToM;
      if (n < many_threshold) {
        if (k >= 2) histogram_add(a.nearest, r1_km);
        continue;
      }
      const double rk_km =
          sample.visible_distances_m[many_threshold - 1] / kKmToM;
      const double delta = r1_km / rk_km;
      histogram_add(a.delta, delta);
      if (!kth_delta_bin || rk_km >= kth_lo) histogram_add(a.kth, rk_km);
    }
  });

  DistanceStats out;
  out.nearest_given_few = make_histogram(rmin, rmax, bins);
  out.kth_given_many = make_histogram(kth_lo, rmax, bins);
  out.delta_given_many = make_histogram(rmin / rmax, 1.0, bins);
  for (const auto& a : acc) {
    for (int i = 0; i < bins; ++i) {
      out.nearest_given_few.counts[i] += a.nearest.counts[i];
      out.kth_given_many.counts[i] += a.kth.counts[i];
      out.delta_given_many.counts[i] += a.delta.counts[i];
    }
    out.nearest_given_few.total += a.nearest.total;
    out.kth_given_many.total += a.kth.total;
    out.delta_given_many.total += a.delta.total;
  }
  for (Histogram* h : {&out.nearest_given_few, &out.kth_given_many,
                       &out.delta_given_many})
    h->sufficient = h->total >= kMinConditioned;
  return out;
}

std::pair<double, int> chi_square_statistic(
    const Histogram& hist, const std::function<double(double)>& pdf) {
  const int bins = static_cast<int>(hist.counts.size());
  std::vector<double> expected(bins);
  for (int i = 0; i < bins; ++i)
    expected[i] = hist.total * integrate(pdf, hist.edges[i],
                                         hist.edges[i + 1], 1e-8, 1e-14);
  // Merge runs of bins until each merged cell expects at least 5 counts.
  double stat = 0.0;
  int cells = 0;
  double obs = 0.0, exp_acc = 0.0;
  for (int i = 0; i < bins; ++i) {
    obs += hist.counts[i];
    exp_acc += expected[i];
    if (exp_acc >= 5.0) {
      stat += (obs - exp_acc) * (obs - exp_acc) / exp_acc;
      ++cells;
      obs = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 && cells > 0) {
    // Fold the leftover tail into the last cell.
    stat += (obs - exp_acc) * (obs - exp_acc) / exp_acc;
  }
  return {stat, std::max(1, cells - 1)};
}

}  // namespace satcov
