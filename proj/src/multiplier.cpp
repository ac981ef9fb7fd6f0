#include "grushin/multiplier.hpp"

#include <cmath>

#include "grushin/error.hpp"

namespace grushin {

Multiplier Multiplier::dilated(double c) const {
  require(c > 0, "multiplier dilation needs c > 0");
  Multiplier m = *this;
  auto f = fn;
  m.fn = [f, c](double l) { return f(c * l); };
  m.support_lo = support_lo / c;
  m.support_hi = support_hi / c;
  m.negligible_above = negligible_above / c;
  m.label = label + "_(" + std::to_string(c) + ")";
  return m;
}

Multiplier Multiplier::times(const Multiplier& other) const {
  Multiplier m;
  auto f = fn;
  auto g = other.fn;
  m.fn = [f, g](double l) { return f(l) * g(l); };
  m.support_lo = std::max(support_lo, other.support_lo);
  m.support_hi = std::min(support_hi, other.support_hi);
  m.negligible_above = std::min(negligible_above, other.negligible_above);
  m.smoothness = std::min(smoothness, other.smoothness);
  m.label = label + "*" + other.label;
  return m;
}

Multiplier bump(double lo, double hi) {
  require(hi > lo, "bump needs lo < hi");
  Multiplier m;
  m.fn = [lo, hi](double l) -> cplx {
    const double x = (2.0 * l - lo - hi) / (hi - lo);
    if (std::fabs(x) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
  };
  m.support_lo = lo;
  m.support_hi = hi;
  m.label = "bump";
  return m;
}

Multiplier heat(double t) {
  require(t > 0, "heat multiplier needs t > 0");
  Multiplier m;
  m.fn = [t](double l) -> cplx { return std::exp(-t * l); };
  m.support_lo = 0.0;
  m.negligible_above = 40.0 / t;
  m.label = "heat";
  return m;
}

Multiplier bochner_riesz(double t, double kappa) {
  require(t > 0 && kappa >= 0, "Bochner-Riesz multiplier needs t > 0 and kappa >= 0");
  Multiplier m;
  if (kappa == 0.0)
    m.fn = [t](double l) -> cplx { return l >= 0 && t * l < 1.0 ? 1.0 : 0.0; };
  else
    m.fn = [t, kappa](double l) -> cplx { return l >= 0 && t * l < 1.0 ? std::pow(1.0 - t * l, kappa) : 0.0; };
  m.support_lo = 0.0;
  m.support_hi = 1.0 / t;
  m.smoothness = kappa;
  m.label = "bochner_riesz";
  return m;
}

Multiplier indicator(double lo, double hi) {
  require(hi >= lo, "indicator needs lo <= hi");
  Multiplier m;
  m.fn = [lo, hi](double l) -> cplx { return l >= lo && l <= hi ? 1.0 : 0.0; };
  m.support_lo = lo;
  m.support_hi = hi;
  m.smoothness = 0.0;
  m.label = "indicator";
  return m;
}

Multiplier constant(cplx value) {
  Multiplier m;
  m.fn = [value](double) { return value; };
  m.label = "constant";
  return m;
}

Multiplier identity() {
  Multiplier m;
  m.fn = [](double l) -> cplx { return l; };
  m.label = "identity";
  return m;
}

Multiplier imaginary_power(double theta) {
  Multiplier m;
  m.fn = [theta](double l) -> cplx {
    if (l <= 0) return 0.0;
    const double p = theta * std::log(l);
    return {std::cos(p), std::sin(p)};
  };
  m.label = "imaginary_power";
  return m;
}

}  // namespace grushin
