#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "satcov/quadrature.hpp"
#include "satcov/special.hpp"

using namespace satcov;

namespace {
// the two reference parameter sets used throughout
FadingParams light_shadowing() { return FadingParams(1, 0.063, 8.97e-4); }
FadingParams heavy_los() { return FadingParams(10, 0.126, 0.835); }
}  // namespace

TEST_CASE("pochhammer") {
  CHECK(pochhammer(3.7, 0) == 1.0);
  CHECK(pochhammer(-2.0, 0) == 1.0);
  CHECK(pochhammer(3.0, 2) == doctest::Approx(12.0));
  CHECK(pochhammer(1.0, 5) == doctest::Approx(120.0));
  // (1-m)_z hits the zero factor for z >= m
  for (int m = 1; m <= 6; ++m)
    for (int z = m; z <= m + 2; ++z) CHECK(pochhammer(1.0 - m, z) == 0.0);
  // recurrence (x)_{z+1} = (x)_z (x+z)
  for (int z = 0; z < 8; ++z)
    CHECK(pochhammer(2.5, z + 1) ==
          doctest::Approx(pochhammer(2.5, z) * (2.5 + z)));
}

TEST_CASE("upper incomplete gamma") {
  CHECK(upper_incomplete_gamma(1, 0.7) == doctest::Approx(std::exp(-0.7)));
  CHECK(upper_incomplete_gamma(3, 0.0) == doctest::Approx(2.0));
  CHECK(upper_incomplete_gamma(2, 1.0) ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));

  // Gamma(a, 0) = (a-1)!
  double fact = 1.0;
  for (int a = 1; a <= 20; ++a) {
    if (a >= 2) fact *= a - 1;
    CHECK(upper_incomplete_gamma(a, 0.0) == doctest::Approx(fact).epsilon(1e-12));
  }

  // quadrature oracle of the defining integral
  for (int a : {2, 4, 7}) {
    const double x = 1.3;
    const double direct = integrate(
        [&](double t) { return std::pow(t, a - 1) * std::exp(-t); }, x, 60.0,
        1e-11, 1e-14);
    CHECK(upper_incomplete_gamma(a, x) == doctest::Approx(direct).epsilon(1e-9));
  }
  CHECK_THROWS(upper_incomplete_gamma(0, 1.0));
}

TEST_CASE("zeta coefficients") {
  const auto f1 = light_shadowing();
  // m=1 collapses: zeta(0) = 1/(2b + Omega)
  CHECK(zeta_coeff(f1, 0) ==
        doctest::Approx(1.0 / (2.0 * 0.063 + 8.97e-4)).epsilon(1e-12));
  CHECK(zeta_coeff(f1, 0) == doctest::Approx(7.8804).epsilon(1e-4));
  CHECK_THROWS(zeta_coeff(f1, 1));
  CHECK_THROWS(zeta_coeff(f1, -1));

  const auto f10 = heavy_los();
  // z=0 closed form for any parameters
  const double m = 10, b = 0.126, om = 0.835;
  CHECK(zeta_coeff(f10, 0) ==
        doctest::Approx(std::pow(2 * b * m / (2 * b * m + om), m) *
                        f10.beta()));
  for (int z = 0; z < 10; ++z) CHECK(zeta_coeff(f10, z) >= 0.0);
  CHECK_THROWS(zeta_coeff(f10, 10));
}

TEST_CASE("fading params validation and derived constants") {
  CHECK_THROWS(FadingParams(0, 0.1, 0.1));
  CHECK_THROWS(FadingParams(21, 0.1, 0.1));
  CHECK_THROWS(FadingParams(1, 0.0, 0.1));
  CHECK_THROWS(FadingParams(1, 0.1, -0.1));
  const auto f = heavy_los();
  CHECK(f.beta() > f.c_fad());
  CHECK(f.c_fad() >= 0.0);
  CHECK(f.mean_power() == doctest::Approx(2 * 0.126 + 0.835));
}

TEST_CASE("erlang mixture") {
  const auto one = erlang_mixture_weights(light_shadowing());
  REQUIRE(one.size() == 1);
  CHECK(one[0].weight == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one[0].shape == 1);
  CHECK(one[0].rate == doctest::Approx(light_shadowing().beta() -
                                       light_shadowing().c_fad()));

  for (const auto& f : {light_shadowing(), heavy_los()}) {
    const auto mix = erlang_mixture_weights(f);
    REQUIRE(static_cast<int>(mix.size()) == f.m());
    double wsum = 0.0, mean = 0.0;
    for (const auto& c : mix) {
      CHECK(c.weight >= 0.0);
      wsum += c.weight;
      mean += c.weight * c.shape / c.rate;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(f.mean_power()).epsilon(1e-10));
  }
}

TEST_CASE("channel power ccdf") {
  for (const auto& f : {light_shadowing(), heavy_los()}) {
    CHECK(channel_power_ccdf(f, 0.0) == doctest::Approx(1.0));
    double prev = 1.0;
    for (double h = 0.05; h < 3.0; h += 0.05) {
      const double c = channel_power_ccdf(f, h);
      CHECK(c <= prev + 1e-15);
      CHECK(c >= 0.0);
      prev = c;
    }
  }
  // m=1 is a plain exponential tail
  const auto f1 = light_shadowing();
  const double rate = f1.beta() - f1.c_fad();
  for (double h : {0.1, 0.5, 1.7})
    CHECK(channel_power_ccdf(f1, h) ==
          doctest::Approx(std::exp(-rate * h)).epsilon(1e-12));
}

TEST_CASE("pdf integrates to 1 and matches -dCCDF/dh") {
  for (const auto& f : {light_shadowing(), heavy_los()}) {
    const double mass = integrate(
        [&](double h) { return channel_power_pdf(f, h); }, 0.0, 80.0, 1e-10,
        1e-13);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    for (double h : {0.2, 0.6, 1.1, 2.5}) {
      const double eps = 1e-5;
      const double fd = (channel_power_ccdf(f, h - eps) -
                         channel_power_ccdf(f, h + eps)) /
                        (2.0 * eps);
      CHECK(fd == doctest::Approx(channel_power_pdf(f, h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("amplitude density consistency with the mixture form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 4.0);
  for (const auto& f : {light_shadowing(), heavy_los()}) {
    for (int i = 0; i < 200; ++i) {
      const double h = u(rng);
      const double x = std::sqrt(h);
      // density of H from the density of the amplitude sqrt(H)
      const double from_amplitude = channel_amplitude_pdf(f, x) / (2.0 * x);
      CHECK(from_amplitude ==
            doctest::Approx(channel_power_pdf(f, h)).epsilon(1e-8));
    }
  }
}

TEST_CASE("confluent 1F1") {
  CHECK(confluent_1f1(2.3, 1.7, 0.0) == doctest::Approx(1.0));
  for (double x : {-1.0, 0.5, 3.0})
    CHECK(confluent_1f1(1.0, 1.0, x) == doctest::Approx(std::exp(x)).epsilon(1e-11));
  CHECK(confluent_1f1(2.0, 1.0, 0.5) ==
        doctest::Approx(1.5 * std::exp(0.5)).epsilon(1e-11));
  CHECK(confluent_1f1(2.0, 1.0, 0.5) == doctest::Approx(2.4731).epsilon(1e-4));
}
