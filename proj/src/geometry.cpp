#include "grushin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "grushin/error.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace grushin {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// The surrogate distance written in terms of the three scalars it depends on.
double distance_scalar(double dprime, double sum_abs, double dsecond) {
  const double root = std::sqrt(dsecond);
  if (root <= sum_abs) return dprime + (dsecond == 0.0 ? 0.0 : dsecond / sum_abs);
  return dprime + root;
}

double sphere_area(int k) {  // |S^{k-1}| in R^k
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

}  // namespace

void Dimensions::validate() const {
  require(d1 >= 1 && d2 >= 1, "dimensions need d1 >= 1 and d2 >= 1");
}

Point dilate(double r, const Point& x) {
  require(r > 0, "dilation factor r must be > 0");
  Point y = x;
  for (auto& v : y.xp) v *= r;
  for (auto& v : y.xpp) v *= r * r;
  return y;
}

double distance(const Point& x, const Point& y) {
  require(x.xp.size() == y.xp.size() && x.xpp.size() == y.xpp.size(), "points must have matching dimensions");
  return distance_scalar(norm_diff(x.xp, y.xp), norm(x.xp) + norm(y.xp), norm_diff(x.xpp, y.xpp));
}

double ball_volume_formula(const Point& x, double r) {
  require(r >= 0, "ball radius must be >= 0");
  const auto dims = x.dims();
  return std::pow(r, dims.d1 + dims.d2) * std::pow(std::max(r, norm(x.xp)), dims.d2);
}

MonteCarloVolume ball_volume_mc(const Point& x, double r, std::int64_t samples, std::uint64_t seed) {
  require(samples >= 1000, "Monte Carlo volume needs samples >= 1000");
  require(r >= 0, "ball radius must be >= 0");
  if (r == 0) return {};
  const auto dims = x.dims();
  const double hp = r;
  const double hs = r * (r + 2.0 * norm(x.xp));
  const double box = std::pow(2.0 * hp, dims.d1) * std::pow(2.0 * hs, dims.d2);
  Rng rng(seed);
  Point z = x;
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < z.xp.size(); ++i) z.xp[i] = x.xp[i] + hp * (2.0 * rng.uniform() - 1.0);
    for (std::size_t i = 0; i < z.xpp.size(); ++i) z.xpp[i] = x.xpp[i] + hs * (2.0 * rng.uniform() - 1.0);
    if (distance(x, z) < r) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

double weight(double R, const Point& x, const Point& y) {
  require(R > 0, "weight scale R must be > 0");
  const double ny = norm(y.xp);
  const double m = ny == 0.0 ? R : std::min(R, 1.0 / ny);
  return m * norm(x.xp);
}

double distance_bound_constant(Dimensions dims, double R, int samples, double extent, std::uint64_t seed) {
  dims.validate();
  require(R > 0 && samples > 0 && extent > 0, "distance_bound_constant needs R, samples, extent > 0");
  Rng rng(seed);
  Point x{std::vector<double>(dims.d1), std::vector<double>(dims.d2)}, y = x;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    // log-uniform radii so that both near-diagonal and far pairs are sampled
    const double sx = extent * std::pow(2.0, -12.0 * rng.uniform());
    const double sy = extent * std::pow(2.0, -12.0 * rng.uniform());
    for (auto& v : x.xp) v = sx * (2.0 * rng.uniform() - 1.0);
    for (auto& v : x.xpp) v = sx * sx * (2.0 * rng.uniform() - 1.0);
    for (auto& v : y.xp) v = sy * (2.0 * rng.uniform() - 1.0);
    for (auto& v : y.xpp) v = sy * sy * (2.0 * rng.uniform() - 1.0);
    worst = std::max(worst, weight(R, x, y) / (1.0 + R * distance(x, y)));
  }
  return worst;
}

VolumeBound volume_bound_integral(double R, const Point& y, double gamma, double beta) {
  const auto dims = y.dims();
  dims.validate();
  require(R > 0, "volume bound needs R > 0");
  require(gamma >= 0 && gamma < 0.5 * std::min(dims.d1, dims.d2), "volume bound needs 0 <= gamma < min{d1,d2}/2");
  require(beta > 0.5 * dims.Q() - gamma, "volume bound needs beta > Q/2 - gamma");

  // Translation invariance in x'' puts y'' at the origin; the integrand then
  // depends on x' through (a, b) = (component along y', distance from that
  // axis) and on x'' through rho = |x''|.
  const double ny = norm(y.xp);
  const double m = ny == 0.0 ? R : std::min(R, 1.0 / ny);
  const double scale = 1.0 / R;
  VolumeBound out;
  double qerr = 0.0, terr = 0.0;
  bool ok = true;

  auto integrand = [&](double a, double b, double rho) {
    const double xabs = std::hypot(a, b);
    const double dprime = std::hypot(a - ny, b);
    const double dist = distance_scalar(dprime, xabs + ny, rho);
    return std::pow(1.0 + m * xabs, -2.0 * gamma) * std::pow(1.0 + R * dist, -2.0 * beta);
  };
  const double s2 = sphere_area(dims.d2);
  auto inner = [&](double a, double b) {
    const double kink = std::pow(std::hypot(a, b) + ny, 2);
    auto f = [&](double rho) { return s2 * std::pow(rho, dims.d2 - 1) * integrand(a, b, rho); };
    auto q1 = detail::integrate_finite(f, 0.0, kink);
    auto q2 = detail::integrate_half_line(f, kink, std::max(kink, scale * scale), 1e-7);
    qerr += q1.error + q2.error;
    terr += std::fabs(q2.tail);
    ok = ok && q2.converged;
    return q1.value + q2.value;
  };
  // Integrate a function of a over R with breakpoints at 0 and |y'|.
  auto over_a = [&](auto&& g) {
    const double lo = std::min(0.0, -ny), hi = std::max(0.0, ny);
    double total = 0.0;
    auto left = [&](double s) { return g(lo - s); };
    auto q0 = detail::integrate_finite(g, lo, 0.0);
    auto q1 = detail::integrate_finite(g, 0.0, hi);
    auto qr = detail::integrate_half_line(g, hi, std::max(scale, ny) / 4, 1e-7);
    auto ql = detail::integrate_half_line(left, 0.0, std::max(scale, ny) / 4, 1e-7);
    total = q0.value + q1.value + qr.value + ql.value;
    qerr += q0.error + q1.error + qr.error + ql.error;
    terr += std::fabs(qr.tail) + std::fabs(ql.tail);
    ok = ok && qr.converged && ql.converged;
    return total;
  };

  if (dims.d1 == 1) {
    out.integral = over_a([&](double a) { return inner(a, 0.0); });
  } else {
    const double s1 = sphere_area(dims.d1 - 1);
    out.integral = over_a([&](double a) {
      auto g = [&](double b) { return s1 * std::pow(b, dims.d1 - 2) * inner(a, b); };
      auto q = detail::integrate_half_line(g, 0.0, std::max(scale, ny) / 4, 1e-7);
      qerr += q.error;
      terr += std::fabs(q.tail);
      ok = ok && q.converged;
      return q.value;
    });
  }
  if (!ok || !std::isfinite(out.integral))
    throw NumericError("volume bound integral did not converge (beta too close to Q/2 - gamma)");
  out.ball_volume = ball_volume_formula(y, scale);
  out.ratio = out.integral / out.ball_volume;
  out.quadrature_error = qerr;
  out.truncation_error = terr;
  return out;
}

}  // namespace grushin
