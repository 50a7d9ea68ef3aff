#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "satcov/distributions.hpp"
#include "satcov/geometry.hpp"
#include "satcov/quadrature.hpp"

using namespace satcov;

namespace {
RingGeometry ring_for(double mean_visible) {
  SphereGeometry geom(6371.0, 6871.0, 0.0);
  return to_ring(geom, density_for_mean_visible(geom, mean_visible));
}
}  // namespace

TEST_CASE("count probabilities") {
  const auto ring = ring_for(5.0);
  const auto c = count_probabilities(ring, 2);
  CHECK(c.p_zero == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
  CHECK(c.p_zero == doctest::Approx(6.7379e-3).epsilon(1e-4));
  CHECK(c.p_one_to_km1 == doctest::Approx(5.0 * std::exp(-5.0)).epsilon(1e-12));
  CHECK(c.p_one_to_km1 == doctest::Approx(3.3690e-2).epsilon(1e-4));
  CHECK(c.p_zero + c.p_one_to_km1 + c.p_geq_k == doctest::Approx(1.0).epsilon(1e-12));

  const auto c1 = count_probabilities(ring, 1);
  CHECK(c1.p_one_to_km1 == 0.0);
  CHECK(c1.p_geq_k == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-12));

  for (int k : {1, 2, 3, 5, 8}) {
    const auto p = count_probabilities(ring, k);
    CHECK(p.p_zero >= 0.0);
    CHECK(p.p_one_to_km1 >= 0.0);
    CHECK(p.p_geq_k >= 0.0);
    CHECK(p.p_zero + p.p_one_to_km1 + p.p_geq_k ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("nearest distance given few") {
  // K=2 collapses to the area-uniform annulus density
  const auto ring = ring_for(5.0);
  const double rmin = ring.inner_radius_km, rmax = ring.outer_radius_km;
  for (double r : {550.0, 900.0, 1700.0, 2500.0}) {
    CHECK(nearest_pdf_given_few(ring, 2, r) ==
          doctest::Approx(2.0 * r / (rmax * rmax - rmin * rmin)).epsilon(1e-12));
  }
  CHECK(nearest_pdf_given_few(ring, 2, rmin - 1.0) == 0.0);
  CHECK(nearest_pdf_given_few(ring, 2, rmax + 1.0) == 0.0);
  CHECK_THROWS(nearest_pdf_given_few(ring, 1, 900.0));

  for (double mu : {2.0, 5.0, 10.0}) {
    const auto rg = ring_for(mu);
    for (int k : {2, 3, 5}) {
      const double mass = integrate(
          [&](double r) { return nearest_pdf_given_few(rg, k, r); },
          rg.inner_radius_km, rg.outer_radius_km, 1e-10, 1e-13);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("kth normalizer") {
  const auto ring = ring_for(5.0);
  // delta = 1 removes the exclusion ball: plain count event
  for (int k : {2, 3, 5})
    CHECK(kth_normalizer(ring, k, 1.0) ==
          doctest::Approx(count_probabilities(ring, k).p_geq_k).epsilon(1e-10));
  // shrinking delta shrinks the event
  double prev = kth_normalizer(ring, 2, 1.0);
  for (double d : {0.9, 0.7, 0.5, 0.3}) {
    const double v = kth_normalizer(ring, 2, d);
    CHECK(v <= prev + 1e-15);
    CHECK(v > 0.0);
    prev = v;
  }
}

TEST_CASE("kth distance given many") {
  for (double mu : {5.0, 10.0}) {
    const auto rg = ring_for(mu);
    for (int k : {2, 3, 5}) {
      for (double d : {0.5, 0.8, 0.95}) {
        const double lo = rg.inner_radius_km / d;
        const double mass = integrate(
            [&](double r) { return kth_pdf_given_many(rg, k, d, r); }, lo,
            rg.outer_radius_km, 1e-10, 1e-13);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(kth_pdf_given_many(rg, k, d, lo - 1.0) == 0.0);
        CHECK(kth_pdf_given_many(rg, k, d, rg.outer_radius_km + 1.0) == 0.0);
      }
    }
  }
}

TEST_CASE("kth ccdf endpoints and pdf consistency") {
  const auto ring = ring_for(5.0);
  const int k = 3;
  const double d = 0.7;
  const double lo = ring.inner_radius_km / d;
  const double hi = ring.outer_radius_km;
  CHECK(kth_ccdf_given_many(ring, k, d, lo) == doctest::Approx(1.0));
  CHECK(kth_ccdf_given_many(ring, k, d, hi) == doctest::Approx(0.0));

  // CCDF equals the integrated pdf tail
  for (double r : {800.0, 1200.0, 1800.0, 2400.0}) {
    const double tail = integrate(
        [&](double t) { return kth_pdf_given_many(ring, k, d, t); }, r, hi,
        1e-10, 1e-13);
    CHECK(kth_ccdf_given_many(ring, k, d, r) ==
          doctest::Approx(tail).epsilon(1e-7));
  }

  // -dCCDF/dr matches the pdf at 50 interior points
  for (int i = 1; i <= 50; ++i) {
    const double r = lo + i * (hi - lo) / 52.0;
    const double eps = 1e-3;
    const double fd = (kth_ccdf_given_many(ring, k, d, r - eps) -
                       kth_ccdf_given_many(ring, k, d, r + eps)) /
                      (2.0 * eps);
    CHECK(fd == doctest::Approx(kth_pdf_given_many(ring, k, d, r))
                    .epsilon(1e-5));
  }
}

TEST_CASE("nearest given some: the K=1 reduction") {
  const auto ring = ring_for(5.0);
  const double a = ring.density_per_km2 * M_PI;
  const double rmin = ring.inner_radius_km, rmax = ring.outer_radius_km;
  const double denom = 1.0 - std::exp(-a * (rmax * rmax - rmin * rmin));
  for (int i = 0; i <= 100; ++i) {
    const double r = rmin + i * (rmax - rmin) / 100.0;
    const double expected = 2.0 * a * r *
                            std::exp(-a * (r * r - rmin * rmin)) / denom;
    CHECK(nearest_pdf_given_some(ring, r) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  const double mass = integrate(
      [&](double r) { return nearest_pdf_given_some(ring, r); }, rmin, rmax,
      1e-10, 1e-13);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("relative distance density") {
  for (double mu : {5.0, 10.0}) {
    const auto rg = ring_for(mu);
    const double lo = rg.inner_radius_km / rg.outer_radius_km;
    for (int k : {2, 3, 5}) {
      const double mass = integrate(
          [&](double x) { return delta_pdf(rg, k, x); }, lo, 1.0, 1e-10,
          1e-13);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
      for (double x : {0.3, 0.6, 0.9}) CHECK(delta_pdf(rg, k, x) >= 0.0);
      CHECK(delta_pdf(rg, k, lo - 0.01) == 0.0);
      CHECK(delta_pdf(rg, k, 1.01) == 0.0);
    }
  }
}

TEST_CASE("joint density of nearest and kth") {
  const auto ring = ring_for(5.0);
  CHECK(joint_pdf_d1_dk(ring, 3, 1200.0, 900.0) == 0.0);  // ordering violated
  CHECK(joint_pdf_d1_dk(ring, 3, 400.0, 900.0) == 0.0);
  CHECK(joint_pdf_d1_dk(ring, 3, 900.0, 3000.0) == 0.0);

  for (double mu : {5.0, 10.0}) {
    const auto rg = ring_for(mu);
    const double rmin = rg.inner_radius_km, rmax = rg.outer_radius_km;
    for (int k : {2, 4}) {
      const double mass = integrate(
          [&](double rk) {
            return integrate(
                [&](double r1) { return joint_pdf_d1_dk(rg, k, r1, rk); },
                rmin, rk, 1e-9, 1e-13);
          },
          rmin, rmax, 1e-8, 1e-12);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("joint density reproduces the relative-distance density") {
  const auto ring = ring_for(5.0);
  const int k = 3;
  const double rmin = ring.inner_radius_km, rmax = ring.outer_radius_km;
  // d/dx P[d1 <= x dK] under the integral sign:
  // f_delta(x) = int joint(x rK, rK) rK drK over rK >= rmin/x
  const double lo = rmin / rmax;
  for (int i = 1; i <= 20; ++i) {
    const double x = lo + i * (1.0 - lo) / 22.0;
    const double from_joint = integrate(
        [&](double rk) { return joint_pdf_d1_dk(ring, k, x * rk, rk) * rk; },
        rmin / x, rmax, 1e-9, 1e-13);
    CHECK(from_joint == doctest::Approx(delta_pdf(ring, k, x)).epsilon(1e-5));
  }
}
