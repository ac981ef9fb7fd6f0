#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "estimates_detail.hpp"
#include "grushin/error.hpp"

namespace grushin {

using namespace detail;

void require_heat_localized(double t, const Point& y, const TorusGrid& g) {
  require(t > 0, "heat time t must be > 0");
  const Multiplier H = heat(t);
  const double p0 = std::abs(kernel_value(H, y, y, g, ZeroModePolicy::euclidean));
  require(p0 > 0, "heat kernel diagonal vanishes");
  const double P = g.params().xpp_period;
  for (std::size_t j = 0; j < y.xpp.size(); ++j)
    for (double shift : {0.25 * P, 0.5 * P}) {
      Point x = y;
      x.xpp[j] += shift;
      const double v = std::abs(kernel_value(H, x, y, g, ZeroModePolicy::euclidean));
      if (v > 1e-6 * p0) {
        std::ostringstream os;
        os << "heat kernel at t=" << t << " is not localized in the torus: |p(x,y)|/p(y,y) = " << v / p0
           << " at x'' offset " << shift << " (period " << P << ")";
        throw NumericError(os.str());
      }
    }
}

EstimateReport gaussian_bound_check(const std::vector<double>& t_grid, const std::vector<Point>& x_samples,
                                    const std::vector<Point>& y_samples, const TorusGrid& grid, double slack) {
  require(!t_grid.empty() && !x_samples.empty() && !y_samples.empty(), "gaussian_bound_check needs samples");
  require(slack >= 1.0, "slack must be >= 1");
  const double P = grid.params().xpp_period;
  EstimateReport rep("gaussian_bound", {"t"}, {"C", "b", "diag_max", "min_rel_value", "pairs"});
  double bmin = INFINITY, bmax = 0.0;
  for (double t : t_grid) {
    const Multiplier H = heat(t);
    require_resolved(H, grid, ZeroModePolicy::euclidean);
    const double rt = std::sqrt(t);
    std::vector<cplx> diag(y_samples.size());
    double dmax = 0.0, pmax = 0.0;
    for (std::size_t j = 0; j < y_samples.size(); ++j) {
      require_heat_localized(t, y_samples[j], grid);
      diag[j] = kernel_value(H, y_samples[j], y_samples[j], grid, ZeroModePolicy::euclidean);
      pmax = std::max(pmax, std::abs(diag[j]));
      dmax = std::max(dmax, std::abs(diag[j]) * ball_volume_formula(y_samples[j], rt));
    }
    const double C = slack * dmax;
    double b = INFINITY, min_rel = INFINITY;
    const std::size_t nx = x_samples.size(), ny = y_samples.size();
    std::vector<double> part_b(nx * ny, INFINITY), part_rel(nx * ny, INFINITY);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t q = 0; q < nx * ny; ++q) {
      const Point& x = x_samples[q / ny];
      const Point& y = y_samples[q % ny];
      const cplx p = kernel_value(H, x, y, grid, ZeroModePolicy::euclidean);
      part_rel[q] = p.real() / pmax;
      const double rho = torus_distance(x, y, P);
      const double val = std::abs(p) * ball_volume_formula(y, rt);
      if (rho > 0 && val > 0) part_b[q] = t / (rho * rho) * std::log(C / val);
    }
    for (std::size_t q = 0; q < nx * ny; ++q) {
      b = std::min(b, part_b[q]);
      min_rel = std::min(min_rel, part_rel[q]);
    }
    rep.add_row({t}, {C, b, dmax, min_rel, static_cast<double>(nx * ny)});
    bmin = std::min(bmin, b);
    bmax = std::max(bmax, b);
  }
  rep.summary["b_min"] = bmin;
  rep.summary["b_max"] = bmax;
  rep.summary["b_spread"] = bmin > 0 ? bmax / bmin : INFINITY;
  record_grid(rep, grid, ZeroModePolicy::euclidean);
  return rep;
}

EstimateReport heat_diagonal_limit(const Point& y, const std::vector<double>& t_grid, const TorusGrid& grid) {
  require(t_grid.size() >= 2, "heat_diagonal_limit needs at least two times");
  const auto d = grid.dims();
  double ny2 = 0.0;
  for (double v : y.xp) ny2 += v * v;
  require(ny2 > 0, "heat diagonal limit needs y' != 0");
  const double target = std::pow(std::sqrt(ny2), -d.d2);
  EstimateReport rep("heat_diagonal", with_point_names({"t"}, d), {"p", "scaled", "target", "extrapolated"});
  std::vector<double> s, v, pv;
  for (double t : t_grid) {
    const Multiplier H = heat(t);
    require_resolved(H, grid, ZeroModePolicy::euclidean);
    require_heat_localized(t, y, grid);
    const double p = kernel_value(H, y, y, grid, ZeroModePolicy::euclidean).real();
    const double scaled = p * std::pow(4 * std::numbers::pi * t, 0.5 * (d.d1 + d.d2));
    pv.push_back(p);
    s.push_back(std::sqrt(t));
    v.push_back(scaled);
  }
  const double n = static_cast<double>(s.size());
  double ms = 0, mv = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ms += s[i] / n;
    mv += v[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sxx += (s[i] - ms) * (s[i] - ms);
    sxy += (s[i] - ms) * (v[i] - mv);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  const double a = mv - slope * ms;
  for (std::size_t i = 0; i < t_grid.size(); ++i) rep.add_row(with_point({t_grid[i]}, y), {pv[i], v[i], target, a});
  rep.summary["extrapolated"] = a;
  rep.summary["sqrt_t_slope"] = slope;
  rep.summary["target"] = target;
  rep.summary["rel_error"] = std::fabs(a - target) / target;
  record_grid(rep, grid, ZeroModePolicy::euclidean);
  return rep;
}

}  // namespace grushin
