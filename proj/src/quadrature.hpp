#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace grushin::detail {

struct Quad {
  double value = 0.0;
  double error = 0.0;
  double tail = 0.0;
  bool converged = true;
};

template <class F>
Quad integrate_finite(F&& f, double a, double b, double tol = 1e-10) {
  Quad q;
  if (!(b > a)) return q;
  double err = 0.0;
  q.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 10, tol, &err);
  q.error = err;
  return q;
}

// Integral over [a0, inf) on panels of doubling width. Algebraic tails give
// panel sums in geometric progression, so the remainder after the last panel
// is extrapolated from the ratio of the final two panels.
template <class F>
Quad integrate_half_line(F&& f, double a0, double h0, double rel_tol = 1e-9, int max_panels = 400) {
  Quad q;
  double lo = a0, width = h0, prev = NAN, prev_ratio = NAN;
  int small = 0, steady = 0;
  for (int k = 0; k < max_panels; ++k) {
    const Quad p = integrate_finite(f, lo, lo + width, 1e-10);
    q.value += p.value;
    q.error += p.error;
    const double ratio = prev > 0 ? p.value / prev : NAN;
    const bool contracting = ratio >= 0 && ratio < 1;
    small = contracting && std::fabs(p.value) <= rel_tol * std::fabs(q.value) ? small + 1 : 0;
    // a pure power tail shows up as a constant panel ratio
    steady = contracting && k >= 10 && std::fabs(ratio - prev_ratio) <= 1e-6 * ratio ? steady + 1 : 0;
    if (small >= 3 || steady >= 3) {
      q.tail = p.value * ratio / (1 - ratio);
      q.value += q.tail;
      return q;
    }
    prev = p.value;
    prev_ratio = ratio;
    lo += width;
    width *= 2;
  }
  q.converged = false;
  return q;
}

}  // namespace grushin::detail
