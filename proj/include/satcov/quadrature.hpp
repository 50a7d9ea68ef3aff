#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace satcov {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod (7-15) integration on [a, b].
// Throws QuadratureError when the error estimate misses the tolerance.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-9,
                 double abs_tol = 1e-12, unsigned max_depth = 15) {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          f, a, b, max_depth, rel_tol, &error, &l1);
  // Accept with slack: the requested tolerance drives subdivision, the
  // check below only rejects integrals that are genuinely off.
  const double slack = 10.0 * rel_tol;
  if (!(error <= abs_tol + slack * l1 ||
        error <= slack * std::abs(value) + abs_tol))
    throw QuadratureError("adaptive quadrature did not converge");
  return value;
}

}  // namespace satcov
