#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "satcov/coverage.hpp"
#include "satcov/quadrature.hpp"
#include "satcov/units.hpp"

using namespace satcov;

namespace {

RingGeometry ring_for(double mean_visible) {
  SphereGeometry geom(6371.0, 6871.0, 0.0);
  return to_ring(geom, density_for_mean_visible(geom, mean_visible));
}

RadioConfig default_radio(int n_t) {
  return RadioConfig{dbm_to_watt(43.0), dbm_to_watt(-174.0) * 100e6, 20.0,
                     0.0, 13.5e9, 0.1, 2.0, n_t};
}

const FadingParams kLight(1, 0.063, 8.97e-4);
const FadingParams kHeavy(10, 0.126, 0.835);

}  // namespace

TEST_CASE("few branch SNR coverage") {
  const auto ring = ring_for(5.0);
  const auto budget = default_radio(16).link_budget(2);
  CHECK(snr_coverage_few(ring, budget, kLight, 2, 0.0) == 1.0);
  CHECK_THROWS(snr_coverage_few(ring, budget, kLight, 1, 1.0));

  double prev = 1.0;
  for (double g : {1e-4, 1e-3, 1e-2, 0.1, 1.0}) {
    const double p = snr_coverage_few(ring, budget, kLight, 2, g);
    CHECK(p <= prev + 1e-12);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }

  // noiseless limit
  auto quiet = budget;
  quiet.noise_power_w = budget.noise_power_w * 1e-12;
  CHECK(snr_coverage_few(ring, quiet, kLight, 2, 1e-3) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("many branch basics") {
  const auto ring = ring_for(5.0);
  const auto budget = default_radio(16).link_budget(2);
  CHECK(sinr_coverage_many(ring, budget, kLight, 2, 0.7, 0.0) == 1.0);
  CHECK_THROWS(sinr_coverage_many(ring, budget, kLight, 1, 0.7, 1.0));

  double prev = 1.0;
  for (double g : {1e-4, 1e-3, 1e-2, 0.1}) {
    const double p = sinr_coverage_many(ring, budget, kLight, 2, 0.7, g);
    CHECK(p <= prev + 1e-12);
    CHECK(p >= 0.0);
    prev = p;
  }
}

TEST_CASE("approximation equals the exact value when m = 1") {
  const auto ring = ring_for(5.0);
  const auto budget = default_radio(16).link_budget(2);
  for (double g : {1e-3, 1e-2, 0.1}) {
    for (double d : {0.5, 0.9}) {
      const double exact = sinr_coverage_many(ring, budget, kLight, 2, d, g);
      // any admissible kappa collapses to 1 at m=1
      const double approx =
          sinr_coverage_many_approx(ring, budget, kLight, 2, d, g, 1.0);
      CHECK(std::abs(exact - approx) < 1e-10);
    }
  }
}

TEST_CASE("kappa bracket contains the exact value") {
  const auto ring = ring_for(5.0);
  const auto budget = default_radio(16).link_budget(2);
  const auto tight = kappa_tight(kHeavy.m());
  REQUIRE(static_cast<int>(tight.size()) == 10);
  for (double kv : tight) {
    CHECK(kv > 0.0);
    CHECK(kv <= 1.0);
  }

  for (double g : {1e-3, 1e-2, 0.1}) {
    const double d = 0.7;
    const double exact = sinr_coverage_many(ring, budget, kHeavy, 2, d, g);
    const double lower =
        sinr_coverage_many_approx(ring, budget, kHeavy, 2, d, g, 1.0);
    const double upper = sinr_coverage_many_approx(
        ring, budget, kHeavy, 2, d, g, std::span<const double>(tight));
    CHECK(lower <= exact + 1e-9);
    CHECK(exact <= upper + 1e-9);
  }

  std::vector<double> too_big(10, 1.5);
  CHECK_THROWS(sinr_coverage_many_approx(ring, budget, kHeavy, 2, 0.7, 0.1,
                                         std::span<const double>(too_big)));
  std::vector<double> too_small(10, 0.01);
  CHECK_THROWS(sinr_coverage_many_approx(ring, budget, kHeavy, 2, 0.7, 0.1,
                                         std::span<const double>(too_small)));
}

TEST_CASE("conditional coverage decomposition") {
  const auto ring = ring_for(5.0);
  const auto budget = default_radio(16).link_budget(2);
  const auto r = coverage_cond_delta(ring, budget, kLight, 2, 0.7, 1e-2);
  const auto counts = count_probabilities(ring, 2);
  CHECK(r.weight_few == doctest::Approx(counts.p_one_to_km1));
  CHECK(r.weight_many == doctest::Approx(counts.p_geq_k));
  CHECK(r.probability ==
        doctest::Approx(r.weight_few * r.few_branch +
                        r.weight_many * r.many_branch));
  CHECK(r.few_branch >= 0.0);
  CHECK(r.few_branch <= 1.0);
  CHECK(r.many_branch >= 0.0);
  CHECK(r.many_branch <= 1.0);

  // vanishing threshold: everything visible covers
  const auto r0 = coverage_cond_delta(ring, budget, kLight, 2, 0.7, 0.0);
  CHECK(r0.probability == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-10));
  CHECK(r0.probability == doctest::Approx(0.99326).epsilon(1e-4));

  // closer nearest-to-kth ratio means stronger serving link
  const double ga = 1e-2;
  const double c05 = coverage_cond_delta(ring, budget, kLight, 2, 0.5, ga).probability;
  const double c07 = coverage_cond_delta(ring, budget, kLight, 2, 0.7, ga).probability;
  const double c09 = coverage_cond_delta(ring, budget, kLight, 2, 0.9, ga).probability;
  CHECK(c05 >= c07);
  CHECK(c07 >= c09);
}

TEST_CASE("marginal coverage matches independent delta quadrature") {
  const auto ring = ring_for(5.0);
  const auto budget = default_radio(16).link_budget(2);
  const int k = 2;
  for (double g : {1e-2, 0.1}) {
    const auto marg = coverage_marginal(ring, budget, kLight, k, g);
    const double lo = ring.inner_radius_km / ring.outer_radius_km;
    const double via_cond = integrate(
        [&](double x) {
          return delta_pdf(ring, k, x) *
                 sinr_coverage_many(ring, budget, kLight, k, x, g);
        },
        lo, 1.0, 1e-6, 1e-10);
    CHECK(std::abs(marg.many_branch - via_cond) < 1e-4);
  }

  const auto r0 = coverage_marginal(ring, budget, kLight, 2, 0.0);
  CHECK(r0.probability == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-10));
}

TEST_CASE("dispatch and the K = 1 baseline") {
  const auto ring = ring_for(5.0);
  const auto radio = default_radio(16);
  const auto r1 = coverage(ring, radio.link_budget(1), kLight, 1, 1e-2);
  CHECK(r1.weight_many == doctest::Approx(1.0 - std::exp(-5.0)));
  CHECK(r1.probability >= 0.0);
  CHECK(r1.probability <= 1.0);
  CHECK(coverage_single(ring, radio.link_budget(1), kLight, 0.0).probability ==
        doctest::Approx(1.0 - std::exp(-5.0)));

  const auto r2 = coverage(ring, radio.link_budget(2), kLight, 2, 1e-2);
  const auto m2 = coverage_marginal(ring, radio.link_budget(2), kLight, 2, 1e-2);
  CHECK(r2.probability == doctest::Approx(m2.probability));
  CHECK_THROWS(coverage_marginal(ring, radio.link_budget(2), kLight, 1, 1e-2));
}

TEST_CASE("coverage monotone in gamma, noise, side lobes, antennas") {
  const auto ring = ring_for(5.0);
  const auto radio = default_radio(16);
  const auto budget = radio.link_budget(2);

  double prev = 1.0;
  for (double g : {1e-3, 1e-2, 0.1, 1.0}) {
    const double p = coverage_marginal(ring, budget, kLight, 2, g).probability;
    CHECK(p <= prev + 1e-9);
    prev = p;
  }

  const double g = 1e-2;
  auto noisy = budget;
  noisy.noise_power_w *= 4.0;
  CHECK(coverage_marginal(ring, noisy, kLight, 2, g).probability <=
        coverage_marginal(ring, budget, kLight, 2, g).probability + 1e-9);

  auto hot = budget;
  hot.interferer_gain_ratio = 0.4;
  CHECK(coverage_marginal(ring, hot, kLight, 2, g).probability <=
        coverage_marginal(ring, budget, kLight, 2, g).probability + 1e-9);

  // more antennas, higher serving gain at fixed K
  const auto big = default_radio(64).link_budget(2);
  CHECK(coverage_marginal(ring, big, kLight, 2, g).probability >=
        coverage_marginal(ring, budget, kLight, 2, g).probability - 1e-9);
}

TEST_CASE("rate coverage mapping") {
  const auto ring = ring_for(5.0);
  const auto budget = default_radio(16).link_budget(2);
  const double w = 100e6;
  CHECK(rate_coverage(ring, budget, kLight, 2, 0.0, w) ==
        doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-10));
  // rate = W maps to gamma = 1
  CHECK(rate_coverage(ring, budget, kLight, 2, w, w) ==
        doctest::Approx(
            coverage_marginal(ring, budget, kLight, 2, 1.0).probability));
  CHECK_THROWS(rate_coverage(ring, budget, kLight, 2, -1.0, w));
  CHECK_THROWS(rate_coverage(ring, budget, kLight, 2, 1.0, 0.0));
}

TEST_CASE("ergodic spectral efficiency") {
  const auto ring = ring_for(5.0);
  const auto radio = default_radio(4);
  const double se2 = ergodic_se(ring, radio.link_budget(2), kLight, 2);
  CHECK(se2 > 0.0);

  // hotter side lobes can only hurt
  auto hot = radio;
  hot.interferer_gain_ratio = 0.5;
  const double se2_hot = ergodic_se(ring, hot.link_budget(2), kLight, 2);
  CHECK(se2_hot <= se2 + 1e-6);
}

TEST_CASE("optimal cluster size") {
  const auto ring = ring_for(5.0);
  const auto single = optimal_cluster_size(ring, default_radio(1), kLight);
  CHECK(single.k_star == 1);

  const auto sweep = ergodic_se_sweep(ring, default_radio(4), kLight);
  REQUIRE(sweep.size() == 4);
  const auto best = optimal_cluster_size(ring, default_radio(4), kLight);
  double max_se = 0.0;
  for (const auto& e : sweep) max_se = std::max(max_se, e.se);
  CHECK(best.se == doctest::Approx(max_se));
  // ties break toward the smaller K
  for (const auto& e : sweep)
    if (e.k < best.k_star) CHECK(e.se < best.se);
}
