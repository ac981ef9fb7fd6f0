#include <cmath>
#include <numbers>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/estimates.hpp"

using namespace grushin;

namespace {

GridPtr small_grid() {
  static const GridPtr g = [] {
    GridParams p;
    p.dims = {1, 1};
    p.xp_halfwidth = 15.2;
    p.np_points = 128;
    p.xpp_period = 2 * std::numbers::pi;
    p.npp_points = 128;
    p.hermite_cutoff = 41;
    return make_grid(p);
  }();
  return g;
}

/// Resolves heat kernels down to t = 1/50 with room for |y'| <= 2 in the torus.
const TorusGrid& heat_grid() {
  static const GridPtr g = [] {
    GridParams p;
    p.dims = {1, 1};
    p.xp_halfwidth = 530;
    p.np_points = 131072;
    p.xpp_period = 16 * std::numbers::pi;
    p.npp_points = 32768;
    p.hermite_cutoff = 16001;
    return make_grid(p);
  }();
  return *g;
}

std::vector<Point> ys(std::initializer_list<double> xp) {
  std::vector<Point> out;
  for (double v : xp) out.push_back(Point{{v}, {0.0}});
  return out;
}

}  // namespace

TEST_CASE("fractional ratio") {
  const auto g = small_grid();
  const auto r0 = fractional_ratio(0.0, 20, g, 1);
  for (double v : r0.column("ratio")) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  // a single ground state h~_0(., xi0) e^{i xi0 x''} with gamma = 1: the
  // numerator is the Gaussian moment (1/(2 xi0))^{1/2}, the denominator xi0^{-1/2}
  FractionalOptions one;
  one.modes = 1;
  one.max_degree = 0;
  one.max_lattice = 1;
  const auto r1 = fractional_ratio(1.0, 10, g, 2, one);
  for (double v : r1.column("ratio")) CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));

  for (double gamma : {0.25, 0.5, 1.0}) {
    const auto r = fractional_ratio(gamma, 200, g, 20240101);
    CHECK(std::isfinite(r.summary.at("max_ratio")));
    CHECK(r.summary.at("max_ratio") <= 1.2 * r.summary.at("max_ratio_first_half"));
  }
  CHECK_THROWS_AS(fractional_ratio(-0.1, 5, g, 1), PreconditionError);
}

TEST_CASE("rough weighted check") {
  const auto g = small_grid();
  const auto F = bump(1.5, 5.5);
  const auto zero = rough_weighted_check(F.times(constant(0.0)), 0.25, ys({0.0}), g);
  CHECK(zero.values[0][2] == kZeroOverZero);
  const auto r0 = rough_weighted_check(F, 0.0, ys({0.0, 1.0, 3.0}), g);
  for (double v : r0.column("ratio")) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  const auto r = rough_weighted_check(F, 0.4, ys({0.0, 1.0, 2.0, 4.0, 8.0}), g);
  CHECK(r.summary.at("max_ratio") < 2.0);
  CHECK_THROWS_AS(rough_weighted_check(bump(1.1, 1.9), 0.25, ys({0.0}), g), PreconditionError);
  CHECK_THROWS_AS(rough_weighted_check(heat(1.0), 0.25, ys({0.0}), g), PreconditionError);
}

TEST_CASE("weighted Plancherel ratio") {
  const auto g = small_grid();
  const auto F = bump(1.0, 4.0);
  const Point y{{0.5}, {0.0}};
  const auto r0 = weighted_plancherel_ratio(F, 0.0, 1.0, {y}, g);
  const double direct = std::sqrt(ball_volume_formula(y, 1.0)) *
                        std::sqrt(kernel_plancherel_sum(F, y, *g)) / dilated_l2_norm(F, 1.0);
  CHECK(r0.values[0][0] == doctest::Approx(direct).epsilon(1e-10));

  const auto a = weighted_plancherel_ratio(F, 0.4, 1.0, {y}, g);
  const auto b = weighted_plancherel_ratio(bump(4.0, 16.0), 0.4, 2.0, {dilate(0.5, y)}, g->dilated(0.5));
  CHECK(b.values[0][0] == doctest::Approx(a.values[0][0]).epsilon(0.05));

  CHECK(dilated_l2_norm(F.dilated(4.0), 0.5) == doctest::Approx(dilated_l2_norm(F, 1.0)).epsilon(1e-12));

  try {
    weighted_plancherel_ratio(F, 0.7, 1.0, {y}, g);
    FAIL("gamma = 0.7 accepted");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("γ ∈ [0, d2/2[") != std::string::npos);
  }
  CHECK_THROWS_AS(weighted_plancherel_ratio(bump(0.5, 4.0), 0.2, 1.0, {y}, g), PreconditionError);
  CHECK_THROWS_AS(weighted_plancherel_ratio(F, 0.2, 0.0, {y}, g), PreconditionError);
  const auto e = weighted_plancherel_ratio(F, 0.6, 1.0, {y}, g, true);
  CHECK(e.exploratory);
}

TEST_CASE("shared kernel norm across the kernel estimates") {
  const auto g = small_grid();
  const auto F = bump(1.0, 4.0);
  const auto y = ys({0.0, 1.5});
  const auto a = rough_weighted_check(F, 0.0, y, g);
  const auto b = weighted_plancherel_ratio(F, 0.0, 1.0, y, g);
  const auto c = weighted_l2_full_check(F, 0.0, 1.0, 0.0, 1.0, y, g);
  for (std::size_t i = 0; i < y.size(); ++i) {
    CHECK(b.cell(i, "kernel_l2") == doctest::Approx(a.cell(i, "kernel_l2")).epsilon(1e-12));
    CHECK(c.cell(i, "kernel_l2") == doctest::Approx(a.cell(i, "kernel_l2")).epsilon(1e-12));
    CHECK(b.cell(i, "weighted_l2") == doctest::Approx(a.cell(i, "kernel_l2")).epsilon(1e-12));
  }
}

TEST_CASE("weighted L2 with distance weight") {
  const auto g = small_grid();
  const auto F = bump(1.0, 4.0);
  const auto y = ys({0.0, 1.0});
  const auto pl = weighted_plancherel_ratio(F, 0.3, 1.0, y, g);
  const auto full = weighted_l2_full_check(F, 0.0, 2.0, 0.3, 1.0, y, g);
  const double fl2 = pl.summary.at("F_l2"), fs = full.summary.at("F_sobolev");
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(full.cell(i, "ratio") * fs == doctest::Approx(pl.cell(i, "ratio") * fl2).epsilon(1e-12));
  double last = 0;
  for (double beta : {3.0, 2.0, 1.5, 1.1}) {
    const double s = weighted_l2_full_check(F, 1.0, beta, 0.3, 1.0, y, g).summary.at("sup_ratio");
    CHECK(s > last);
    last = s;
  }
  CHECK_THROWS_AS(weighted_l2_full_check(F, 1.0, 1.0, 0.3, 1.0, y, g), PreconditionError);
}

TEST_CASE("off-ball L1") {
  const auto g = small_grid();
  const auto F = bump(1.0, 4.0);
  const Point y{{0.5}, {0.0}};
  const auto full = offball_l1(F, 0.5, 2.5, 0.0, 1.0, y, g);
  CHECK(full.integral == doctest::Approx(kernel_column(F, y, g).l1()).epsilon(1e-12));
  CHECK(std::isfinite(full.ratio));
  const auto zero = offball_l1(F.times(constant(0.0)), 0.5, 2.5, 0.5, 1.0, y, g);
  CHECK(zero.integral == 0.0);
  const double rmax = inscribed_radius(*g, y);
  CHECK(rmax > 0);
  CHECK(offball_l1(F, 0.5, 2.5, rmax, 1.0, y, g).integral < full.integral);
  CHECK_THROWS_AS(offball_l1(F, 0.5, 2.5, 1.01 * rmax, 1.0, y, g), PreconditionError);
  CHECK_THROWS_AS(offball_l1(F, 0.5, 1.4, 0.0, 1.0, y, g), PreconditionError);
  const auto sweep = offball_sweep(F, 0.5, 2.5, {0.0, 0.25, 0.5, 1.0}, 1.0, y, g);
  const auto in = sweep.column("integral");
  for (std::size_t i = 1; i < in.size(); ++i) CHECK(in[i] <= in[i - 1]);
}

TEST_CASE("kernel norms") {
  const auto g = small_grid();
  const Point y{{1.0}, {0.0}};
  const auto K = kernel_column(bump(1.0, 4.0), y, g);
  const auto n = kernel_norms(K, y, 1.0, 0.0, 0.0);
  CHECK(n.weighted_l2 == doctest::Approx(std::sqrt(K.norm2())).epsilon(1e-12));
  CHECK(n.l1 == doctest::Approx(K.l1()).epsilon(1e-12));
  CHECK(kernel_norms(K, y, 1.0, 0.3, 1.0).weighted_l2 > n.weighted_l2);
}

TEST_CASE("Gaussian bound") {
  const auto& g = heat_grid();
  const auto x = std::vector<Point>{{{0.0}, {0.0}}, {{0.5}, {0.0}}, {{1.0}, {0.5}}, {{2.0}, {1.0}}, {{0.0}, {0.5}}};
  const auto rep = gaussian_bound_check({0.25, 0.125, 0.0625}, x, ys({0.0, 1.0}), g);
  for (std::size_t i = 0; i < rep.rows(); ++i) {
    CHECK(std::isfinite(rep.cell(i, "C")));
    CHECK(rep.cell(i, "b") > 0.0);
    CHECK(rep.cell(i, "min_rel_value") >= -1e-10);
  }
  CHECK(rep.summary.at("b_spread") < 1.25 * 1.25);
  CHECK_THROWS_AS(gaussian_bound_check({0.01}, x, ys({0.0}), g), PreconditionError);
}

TEST_CASE("heat diagonal") {
  const auto& g = heat_grid();
  const std::vector<double> t{0.16, 0.08, 0.04, 0.02};
  const auto r1 = heat_diagonal_limit(Point{{1.0}, {0.0}}, t, g);
  CHECK(r1.summary.at("extrapolated") == doctest::Approx(1.0).epsilon(0.05));
  CHECK(r1.values.front()[3] == r1.summary.at("extrapolated"));
  const auto r2 = heat_diagonal_limit(Point{{2.0}, {0.0}}, t, g);
  CHECK(r2.summary.at("extrapolated") == doctest::Approx(0.5).epsilon(0.05));
  CHECK_THROWS_AS(heat_diagonal_limit(Point{{0.0}, {0.0}}, t, g), PreconditionError);
  CHECK_THROWS_AS(require_heat_localized(1.0, Point{{1.0}, {0.0}}, *small_grid()), NumericError);
}

TEST_CASE("imaginary powers") {
  LocalNormConfig cfg;
  cfg.t_grid = dyadic_grid(-2, 2, true);
  const auto r = imaginary_power_mw_growth(1.0, {0.0, 2.0, 4.0}, cfg);
  CHECK(r.values[0][0] == doctest::Approx(sobolev_norm(eta_multiplier(), 1.0)).epsilon(1e-10));
  const auto r2 = imaginary_power_mw_growth(1.5, {0.0, 2.0, 4.0}, cfg);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r2.values[i][0] >= r.values[i][0]);
  CHECK(r.fit.has_value());
  CHECK_THROWS_AS(imaginary_power_mw_growth(1.0, {0.5}, cfg), PreconditionError);
  CHECK_THROWS_AS(imaginary_power_mw_growth(-1.0, {2.0}, cfg), PreconditionError);
}

TEST_CASE("Bochner-Riesz means") {
  const auto g = small_grid();
  const auto y = ys({0.0, 1.0});
  const auto smooth = bochner_riesz_sup(20.0, {1.0, 0.5, 0.25}, y, g);
  CHECK(smooth.summary.at("variation") < 1.5);
  CHECK_FALSE(smooth.exploratory);
  const auto sharp = bochner_riesz_sup(0.0, {1.0, 0.5, 0.25}, y, g);
  CHECK(sharp.exploratory);
  const auto s = sharp.column("sup_l1");
  CHECK(s[2] > s[0]);
  CHECK_THROWS_AS(bochner_riesz_sup(-1.0, {1.0}, y, g), PreconditionError);
  CHECK_THROWS_AS(bochner_riesz_sup(1.0, {0.01}, y, g), PreconditionError);
}
