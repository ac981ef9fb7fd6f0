#pragma once

#include <cstdint>
#include <vector>

namespace grushin {

struct Dimensions {
  int d1 = 1;
  int d2 = 1;
  int Q() const { return d1 + 2 * d2; }
  int D() const { return d1 + d2 > 2 * d2 ? d1 + d2 : 2 * d2; }
  void validate() const;
  bool operator==(const Dimensions&) const = default;
};

struct Point {
  std::vector<double> xp;   // x'
  std::vector<double> xpp;  // x''
  Dimensions dims() const { return {static_cast<int>(xp.size()), static_cast<int>(xpp.size())}; }
};

Point dilate(double r, const Point& x);

/// |x'-y'| + |x''-y''|/(|x'|+|y'|) when |x''-y''|^{1/2} <= |x'|+|y'|,
/// |x'-y'| + |x''-y''|^{1/2} otherwise.
double distance(const Point& x, const Point& y);

/// r^{d1+d2} max{r, |x'|}^{d2}
double ball_volume_formula(const Point& x, double r);

struct MonteCarloVolume {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Hit-or-miss estimate of |{z : distance(x,z) < r}| inside the box
/// |z'-x'|_inf < r, |z''-x''|_inf < r(r + 2|x'|).
MonteCarloVolume ball_volume_mc(const Point& x, double r, std::int64_t samples, std::uint64_t seed);

/// min{R, 1/|y'|} |x'|, with 1/0 = inf.
double weight(double R, const Point& x, const Point& y);

/// Largest sampled value of w_R(x,y) / (1 + R distance(x,y)) over random pairs
/// drawn from a box of half-width `extent`.
double distance_bound_constant(Dimensions dims, double R, int samples, double extent, std::uint64_t seed);

struct VolumeBound {
  double integral = 0.0;
  double ball_volume = 0.0;
  double ratio = 0.0;
  double truncation_error = 0.0;  // estimated mass beyond the last far-field panel
  double quadrature_error = 0.0;  // accumulated adaptive-quadrature estimate
};

/// Integral over R^{d1+d2} of (1+w_R(x,y))^{-2 gamma} (1+R distance(x,y))^{-2 beta},
/// compared with ball_volume_formula(y, 1/R).
VolumeBound volume_bound_integral(double R, const Point& y, double gamma, double beta);

}  // namespace grushin
