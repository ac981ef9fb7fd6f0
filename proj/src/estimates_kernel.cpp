#include <algorithm>
#include <functional>
#include <numeric>
#include <cmath>
#include <sstream>

#include "estimates_detail.hpp"
#include "grushin/error.hpp"
#include "grushin/hermite.hpp"
#include "rng.hpp"
#include "spectral_detail.hpp"

namespace grushin {

namespace detail {

std::vector<std::string> with_point_names(std::vector<std::string> names, const Dimensions& d,
                                          const std::string& prefix) {
  for (int j = 0; j < d.d1; ++j) names.push_back(prefix + "_p" + std::to_string(j + 1));
  for (int j = 0; j < d.d2; ++j) names.push_back(prefix + "_pp" + std::to_string(j + 1));
  return names;
}

std::vector<double> with_point(std::vector<double> row, const Point& y) {
  row.insert(row.end(), y.xp.begin(), y.xp.end());
  row.insert(row.end(), y.xpp.begin(), y.xpp.end());
  return row;
}

void record_grid(EstimateReport& rep, const TorusGrid& g, ZeroModePolicy policy) {
  rep.truncation["resolved_lambda_max"] = g.resolved_lambda_max(policy);
  rep.truncation["band_xi_max"] = g.band_xi_max();
  rep.truncation["excluded_slots"] = static_cast<double>(g.excluded_slots());
  rep.truncation["retained_amplitudes"] = static_cast<double>(g.amplitude_count());
}

double wrap(double d, double period) { return d - period * std::round(d / period); }

double torus_distance(const Point& x, const Point& y, double period) {
  Point z = x;
  for (std::size_t j = 0; j < z.xpp.size(); ++j) z.xpp[j] = y.xpp[j] + wrap(x.xpp[j] - y.xpp[j], period);
  return distance(z, y);
}

void require_gamma_range(double gamma, const Dimensions& d) {
  std::ostringstream os;
  os << "γ ∈ [0, d2/2[ required (got γ=" << gamma << ", d2=" << d.d2 << ")";
  require(gamma >= 0 && gamma < 0.5 * d.d2, os.str());
}

void require_dyadic_support(const Multiplier& F, double R) {
  require(R > 0, "spectral scale R must be > 0");
  const double lo = R * R, hi = 4 * R * R, tol = 1e-12 * hi;
  require(F.support_lo >= lo - tol && F.support_hi <= hi + tol,
          "declared support of F must lie in [R^2, 4R^2]");
}

}  // namespace detail

using namespace detail;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * i);
  return s * h / 3.0;
}

double xp_norm_at(const TorusGrid& g, std::size_t i, std::vector<double>& xp) {
  const auto dig = digits(i, static_cast<std::size_t>(g.params().np_points), g.dims().d1);
  double r2 = 0.0;
  for (std::size_t j = 0; j < dig.size(); ++j) {
    xp[j] = g.xp_coord(static_cast<std::size_t>(dig[j]));
    r2 += xp[j] * xp[j];
  }
  return std::sqrt(r2);
}

bool spectrum_meets(const Multiplier& F, const TorusGrid& g) {
  const int d1 = g.dims().d1;
  for (const auto& s : g.band())
    for (int N = d1; N <= s.layer_max; N += 2)
      if (F.in_support(s.xi_abs * N)) return true;
  return false;
}

}  // namespace

KernelNorms kernel_norms(const Field& K, const Point& y, double R, double gamma, double alpha) {
  const auto& g = *K.grid;
  const double P = g.params().xpp_period;
  const double ny = std::sqrt(std::inner_product(y.xp.begin(), y.xp.end(), y.xp.begin(), 0.0));
  const double m = ny == 0.0 ? R : std::min(R, 1.0 / ny);
  std::vector<double> part_l2(g.np_total()), part_w(g.np_total()), part_l1(g.np_total());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < g.np_total(); ++i) {
    Point x = g.point(i, 0);
    const double xabs = xp_norm_at(g, i, x.xp);
    const double wfac = gamma == 0.0 ? 1.0 : std::pow(1.0 + m * xabs, 2.0 * gamma);
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t k = 0; k < g.npp_total(); ++k) {
      const double v = std::norm(K.at(i, k));
      double f = wfac;
      if (alpha != 0.0) {
        const auto dig = digits(k, static_cast<std::size_t>(g.params().npp_points), g.dims().d2);
        for (std::size_t j = 0; j < dig.size(); ++j) x.xpp[j] = g.xpp_coord(static_cast<std::size_t>(dig[j]));
        f *= std::pow(1.0 + R * torus_distance(x, y, P), 2.0 * alpha);
      }
      a += v;
      b += v * f;
      c += std::sqrt(v);
    }
    part_l2[i] = a;
    part_w[i] = b;
    part_l1[i] = c;
  }
  KernelNorms out;
  for (std::size_t i = 0; i < g.np_total(); ++i) {
    out.l2 += part_l2[i];
    out.weighted_l2 += part_w[i];
    out.l1 += part_l1[i];
  }
  const double cell = g.cell_volume();
  out.l2 = std::sqrt(out.l2 * cell);
  out.weighted_l2 = std::sqrt(out.weighted_l2 * cell);
  out.l1 *= cell;
  return out;
}

EstimateReport fractional_ratio(double gamma, int trials, GridPtr grid, std::uint64_t seed,
                                const FractionalOptions& opt) {
  require(gamma >= 0, "fractional_ratio needs gamma >= 0");
  require(trials >= 1, "fractional_ratio needs trials >= 1");
  const auto& g = *grid;
  EstimateReport rep("fractional_ratio", {"gamma", "trial"}, {"ratio", "numerator", "denominator"});
  const auto& modes = g.modes();
  double best = 0.0, best_half = 0.0;
  for (int i = 0; i < trials; ++i) {
    RandomFieldOptions ro;
    ro.modes = opt.modes;
    ro.max_degree = opt.max_degree;
    ro.max_lattice = opt.max_lattice;
    const auto c = random_band_limited(grid, mix_seed(seed, static_cast<std::uint64_t>(i)), ro);
    const Field f = synthesize(c);
    const double num = std::sqrt(apply_P_power(gamma, f).norm2());
    double den2 = 0.0;
    for (const auto& s : g.band())
      for (std::size_t q = 0; q < s.count; ++q) {
        const double lam = l_eigenvalue(modes[q], s.xi_abs);
        den2 += std::norm(c.amplitudes[s.offset + q]) * std::pow(lam, gamma) * std::pow(s.xi_abs, -2.0 * gamma);
      }
    const double den = std::sqrt(den2);
    if (den == 0.0) continue;
    const double r = num / den;
    rep.add_row({gamma, static_cast<double>(i)}, {r, num, den});
    best = std::max(best, r);
    if (i < (trials + 1) / 2) best_half = std::max(best_half, r);
  }
  rep.summary["max_ratio"] = best;
  rep.summary["max_ratio_first_half"] = best_half;
  record_grid(rep, g, ZeroModePolicy::exclude);
  return rep;
}

EstimateReport rough_weighted_check(const Multiplier& F, double gamma, const std::vector<Point>& y_samples,
                                    GridPtr grid) {
  require(gamma >= 0, "rough_weighted_check needs gamma >= 0");
  require(F.support_lo > 0, "rough_weighted_check needs F supported away from 0");
  const auto& g = *grid;
  require_resolved(F, g, ZeroModePolicy::exclude);
  require(spectrum_meets(F, g), "resolved spectrum under supp F is empty");
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  EstimateReport rep("rough_weighted_check", with_point_names({"gamma"}, g.dims()),
                     {"lhs", "rhs", "ratio", "kernel_l2"});
  double worst = 0.0;
  for (const auto& y : y_samples) {
    const Field K = kernel_column(F, y, grid);
    double lhs = 0.0;
    std::vector<double> xp(static_cast<std::size_t>(d1));
    for (std::size_t i = 0; i < g.np_total(); ++i) {
      const double w = std::pow(xp_norm_at(g, i, xp), 2.0 * gamma);
      for (std::size_t k = 0; k < g.npp_total(); ++k) lhs += w * std::norm(K.at(i, k));
    }
    lhs *= g.cell_volume();
    double rhs = 0.0;
    std::vector<double> v(static_cast<std::size_t>(d1));
    for (const auto& s : g.band()) {
      const double sx = std::sqrt(s.xi_abs);
      for (int j = 0; j < d1; ++j) v[j] = sx * y.xp[j];
      const auto H = layer_sums_upto(d1, s.layer_max, v);
      for (std::size_t m = 0; m < H.size(); ++m) {
        const double N = d1 + 2.0 * static_cast<double>(m);
        const double lam = N * s.xi_abs;
        if (!F.in_support(lam)) continue;
        rhs += std::norm(F(lam)) * std::pow(N, gamma) * std::pow(s.xi_abs, 0.5 * d1 - gamma) * H[m];
      }
    }
    rhs *= std::pow(g.params().xpp_period, -d2);
    const double ratio = rhs == 0.0 && lhs == 0.0 ? kZeroOverZero : lhs / rhs;
    worst = std::max(worst, ratio);
    rep.add_row(with_point({gamma}, y), {lhs, rhs, ratio, std::sqrt(K.norm2())});
  }
  rep.summary["max_ratio"] = worst;
  record_grid(rep, g, ZeroModePolicy::exclude);
  return rep;
}

double dilated_l2_norm(const Multiplier& F, double R) {
  require(R > 0, "spectral scale R must be > 0");
  const double c = R * R;
  return std::sqrt(simpson([&](double l) { return std::norm(F(c * l)); }, 1.0, 4.0, 10000));
}

EstimateReport weighted_plancherel_ratio(const Multiplier& F, double gamma, double R,
                                         const std::vector<Point>& y_samples, GridPtr grid, bool exploratory) {
  const auto& g = *grid;
  if (exploratory)
    require(gamma >= 0, "weighted Plancherel needs gamma >= 0");
  else
    require_gamma_range(gamma, g.dims());
  require_dyadic_support(F, R);
  require_resolved(F, g, ZeroModePolicy::exclude);
  const double fn = dilated_l2_norm(F, R);
  EstimateReport rep("weighted_plancherel_ratio", with_point_names({"R", "gamma"}, g.dims()),
                     {"ratio", "weighted_l2", "kernel_l2", "ball_volume"});
  rep.exploratory = exploratory;
  double sup = 0.0;
  for (const auto& y : y_samples) {
    const Field K = kernel_column(F, y, grid);
    const auto kn = kernel_norms(K, y, R, gamma, 0.0);
    const double V = ball_volume_formula(y, 1.0 / R);
    const double ratio = fn == 0.0 ? kZeroOverZero : std::sqrt(V) * kn.weighted_l2 / fn;
    sup = std::max(sup, ratio);
    rep.add_row(with_point({R, gamma}, y), {ratio, kn.weighted_l2, kn.l2, V});
  }
  rep.summary["sup_ratio"] = sup;
  rep.summary["F_l2"] = fn;
  record_grid(rep, g, ZeroModePolicy::exclude);
  return rep;
}

namespace {

double dilated_sobolev(const Multiplier& F, double R, double beta, const SobolevConfig& sob) {
  Multiplier G = F.dilated(R * R);
  return sobolev_norm(G, beta, sob);
}

}  // namespace

EstimateReport weighted_l2_full_check(const Multiplier& F, double alpha, double beta, double gamma, double R,
                                      const std::vector<Point>& y_samples, GridPtr grid, const SobolevConfig& sob) {
  const auto& g = *grid;
  require_gamma_range(gamma, g.dims());
  require(alpha >= 0, "alpha must be >= 0");
  require(beta > alpha, "weighted L2 check needs beta > alpha");
  require_dyadic_support(F, R);
  require_resolved(F, g, ZeroModePolicy::exclude);
  const double fs = dilated_sobolev(F, R, beta, sob);
  EstimateReport rep("weighted_l2_full_check", with_point_names({"R", "alpha", "beta", "gamma"}, g.dims()),
                     {"ratio", "weighted_l2", "kernel_l2", "ball_volume"});
  double sup = 0.0;
  for (const auto& y : y_samples) {
    const Field K = kernel_column(F, y, grid);
    const auto kn = kernel_norms(K, y, R, gamma, alpha);
    const double V = ball_volume_formula(y, 1.0 / R);
    const double ratio = fs == 0.0 ? kZeroOverZero : std::sqrt(V) * kn.weighted_l2 / fs;
    sup = std::max(sup, ratio);
    rep.add_row(with_point({R, alpha, beta, gamma}, y), {ratio, kn.weighted_l2, kn.l2, V});
  }
  rep.summary["sup_ratio"] = sup;
  rep.summary["F_sobolev"] = fs;
  record_grid(rep, g, ZeroModePolicy::exclude);
  return rep;
}

double inscribed_radius(const TorusGrid& g, const Point& y) {
  double yinf = 0.0, ny2 = 0.0;
  for (double v : y.xp) {
    yinf = std::max(yinf, std::fabs(v));
    ny2 += v * v;
  }
  const double ny = std::sqrt(ny2);
  const double half = 0.5 * g.params().xpp_period;
  // r (r + 2|y'|) <= P/2
  const double r_pp = -ny + std::sqrt(ny * ny + half);
  return std::max(0.0, std::min(g.params().xp_halfwidth - yinf, r_pp));
}

OffBall offball_l1(const Multiplier& F, double alpha, double beta, double r, double R, const Point& y, GridPtr grid,
                   const SobolevConfig& sob) {
  const auto& g = *grid;
  require(alpha >= 0, "alpha must be >= 0");
  require(beta > alpha + 0.5 * g.dims().D(), "off-ball estimate needs beta > alpha + D/2");
  require(r >= 0, "radius r must be >= 0");
  require(r <= inscribed_radius(g, y), "radius r exceeds the grid's inscribed radius around y");
  require_dyadic_support(F, R);
  require_resolved(F, g, ZeroModePolicy::exclude);
  const Field K = kernel_column(F, y, grid);
  const double P = g.params().xpp_period;
  std::vector<double> part(g.np_total());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < g.np_total(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < g.npp_total(); ++k) {
      if (r > 0 && torus_distance(g.point(i, k), y, P) <= r) continue;
      acc += std::abs(K.at(i, k));
    }
    part[i] = acc;
  }
  OffBall out;
  for (double v : part) out.integral += v;
  out.integral *= g.cell_volume();
  out.sobolev = dilated_sobolev(F, R, beta, sob);
  const double den = std::pow(1.0 + r * R, -alpha) * out.sobolev;
  out.ratio = den == 0.0 ? (out.integral == 0.0 ? kZeroOverZero : INFINITY) : out.integral / den;
  return out;
}

EstimateReport offball_sweep(const Multiplier& F, double alpha, double beta, const std::vector<double>& r_list,
                             double R, const Point& y, GridPtr grid, const SobolevConfig& sob) {
  EstimateReport rep("offball_l1", with_point_names({"R", "alpha", "beta", "r"}, grid->dims()),
                     {"integral", "ratio", "F_sobolev"});
  double lo = INFINITY, hi = 0.0;
  for (double r : r_list) {
    const auto o = offball_l1(F, alpha, beta, r, R, y, grid, sob);
    rep.add_row(with_point({R, alpha, beta, r}, y), {o.integral, o.ratio, o.sobolev});
    lo = std::min(lo, o.ratio);
    hi = std::max(hi, o.ratio);
  }
  rep.summary["max_ratio"] = hi;
  rep.summary["ratio_spread"] = lo > 0 ? hi / lo : INFINITY;
  record_grid(rep, *grid, ZeroModePolicy::exclude);
  return rep;
}

}  // namespace grushin
