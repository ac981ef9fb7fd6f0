#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <string>

namespace grushin {

using cplx = std::complex<double>;

/// A function of the spectral variable lambda with a declared support. For
/// multipliers without compact support, `negligible_above` marks where |F|
/// has dropped below double precision relative to its maximum; spectral
/// clipping checks use it instead of the (infinite) support bound.
struct Multiplier {
  std::function<cplx(double)> fn;
  double support_lo = 0.0;
  double support_hi = std::numeric_limits<double>::infinity();
  double negligible_above = std::numeric_limits<double>::infinity();
  double smoothness = std::numeric_limits<double>::infinity();
  std::string label;

  cplx operator()(double lambda) const { return fn(lambda); }
  bool in_support(double lambda) const { return lambda >= support_lo && lambda <= support_hi; }
  double effective_hi() const { return support_hi < negligible_above ? support_hi : negligible_above; }

  /// F_(c)(lambda) = F(c lambda).
  Multiplier dilated(double c) const;
  Multiplier times(const Multiplier& other) const;
};

/// exp(1 - 1/(1-x^2)) with x the affine image of lambda from [lo, hi] onto [-1, 1].
Multiplier bump(double lo, double hi);
/// exp(-t lambda)
Multiplier heat(double t);
/// (1 - t lambda)_+^kappa; kappa = 0 is the sharp cutoff on [0, 1/t).
Multiplier bochner_riesz(double t, double kappa);
Multiplier indicator(double lo, double hi);
Multiplier constant(cplx value);
Multiplier identity();
/// lambda^{i theta} on (0, inf)
Multiplier imaginary_power(double theta);

/// G(lambda_1..lambda_d1, xi) for the joint calculus. `xi_abs_min` is the
/// declared lower bound of |xi| on the support; it must be positive.
struct JointMultiplier {
  std::function<cplx(std::span<const double> lambda, std::span<const double> xi)> fn;
  double xi_abs_min = 0.0;
  std::string label;
};

}  // namespace grushin
