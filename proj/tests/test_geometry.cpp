#include <cmath>
#include <random>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/geometry.hpp"

using namespace grushin;

namespace {

Point random_point(std::mt19937_64& e, Dimensions d, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Point p{std::vector<double>(d.d1), std::vector<double>(d.d2)};
  for (auto& v : p.xp) v = u(e);
  for (auto& v : p.xpp) v = u(e);
  return p;
}

double euclid(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("dimensions") {
  for (int d1 = 1; d1 <= 4; ++d1)
    for (int d2 = 1; d2 <= 4; ++d2) {
      Dimensions d{d1, d2};
      CHECK(d.Q() == d1 + 2 * d2);
      CHECK(d.D() == std::max(d1 + d2, 2 * d2));
      CHECK(d.D() == d.Q() - std::min(d1, d2));
    }
  CHECK_THROWS_AS(Dimensions({0, 1}).validate(), PreconditionError);
}

TEST_CASE("dilation") {
  const Point x{{1.0}, {1.0}};
  const auto a = dilate(2.0, x);
  CHECK(a.xp[0] == 2.0);
  CHECK(a.xpp[0] == 4.0);
  const auto id = dilate(1.0, x);
  CHECK(id.xp == x.xp);
  CHECK(id.xpp == x.xpp);
  CHECK_THROWS_AS(dilate(0.0, x), PreconditionError);
  CHECK_THROWS_AS(dilate(-1.0, x), PreconditionError);
  std::mt19937_64 e(1);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_point(e, {2, 3}, 5.0);
    const auto q = dilate(7.0, dilate(1.0 / 7.0, p));
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::fabs(q.xp[j] - p.xp[j]) <= 1e-15 * std::max(1.0, std::fabs(p.xp[j])) * 4);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::fabs(q.xpp[j] - p.xpp[j]) <= 1e-15 * std::max(1.0, std::fabs(p.xpp[j])) * 4);
  }
}

TEST_CASE("surrogate distance") {
  const Point o{{0.0}, {0.0}};
  CHECK(distance(o, o) == 0.0);
  CHECK(distance(Point{{1.5}, {2.0}}, Point{{-0.5}, {2.0}}) == doctest::Approx(2.0));
  for (double t : {0.5, 1.0, 3.0}) CHECK(distance(o, Point{{0.0}, {t * t}}) == doctest::Approx(t));
  // near branch: |x''-y''|^{1/2} <= |x'|+|y'|
  CHECK(distance(Point{{1.0}, {0.0}}, Point{{1.0}, {0.5}}) == doctest::Approx(0.25));

  std::mt19937_64 e(2);
  for (Dimensions d : {Dimensions{1, 1}, Dimensions{2, 1}, Dimensions{1, 2}}) {
    for (int i = 0; i < 200; ++i) {
      const auto x = random_point(e, d, 3.0), y = random_point(e, d, 3.0);
      const double r = distance(x, y);
      CHECK(r >= 0.0);
      CHECK(r == doctest::Approx(distance(y, x)).epsilon(1e-14));
      CHECK(distance(dilate(5.0, x), dilate(5.0, y)) == doctest::Approx(5.0 * r).epsilon(1e-12));
    }
  }
}

TEST_CASE("ball volume formula") {
  const Point o{{0.0}, {0.0}};
  CHECK(ball_volume_formula(o, 2.0) == doctest::Approx(8.0));
  CHECK(ball_volume_formula(Point{{3.0}, {0.0}}, 1.0) == doctest::Approx(3.0));
  std::mt19937_64 e(3);
  for (int i = 0; i < 100; ++i) {
    const Dimensions d{1 + i % 2, 1 + (i / 2) % 2};
    const auto x = random_point(e, d, 4.0);
    const double r = 0.01 + 3.0 * std::generate_canonical<double, 53>(e);
    const double s = 0.2 + 2.0 * std::generate_canonical<double, 53>(e);
    CHECK(ball_volume_formula(dilate(s, x), s * r) ==
          doctest::Approx(std::pow(s, d.Q()) * ball_volume_formula(x, r)).epsilon(1e-12));
    // doubling with C = 2^{d2}
    for (double lam : {0.0, 0.5, 1.0, 3.0, 10.0})
      CHECK(ball_volume_formula(x, lam * r) <=
            std::pow(1 + lam, d.Q()) * ball_volume_formula(x, r) * std::pow(2.0, d.d2) * (1 + 1e-12));
  }
}

TEST_CASE("Monte Carlo ball volume") {
  const Point o{{0.0}, {0.0}};
  const auto z = ball_volume_mc(o, 0.0, 1000, 1);
  CHECK(z.estimate == 0.0);
  CHECK(z.std_error == 0.0);
  CHECK_THROWS_AS(ball_volume_mc(o, 1.0, 999, 1), PreconditionError);

  const auto a = ball_volume_mc(o, 1.0, 200000, 5);
  const double ratio = a.estimate / ball_volume_formula(o, 1.0);
  CHECK(ratio >= 0.1);
  CHECK(ratio <= 10.0);
  CHECK(a.std_error < 0.02 * a.estimate);

  // same seed reproduces, different seed differs
  CHECK(ball_volume_mc(o, 1.0, 5000, 9).estimate == ball_volume_mc(o, 1.0, 5000, 9).estimate);
  CHECK(ball_volume_mc(o, 1.0, 5000, 9).estimate != ball_volume_mc(o, 1.0, 5000, 10).estimate);

  // unit ball at the origin, d1=d2=1: for a = |z'| the z''-section has length
  // 2(1-a)^2 for a < 1/2 and 2a(1-a) above, so the area is 3/2
  CHECK(a.estimate == doctest::Approx(1.5).epsilon(5 * a.std_error / a.estimate + 1e-3));

  double lo = INFINITY, hi = 0;
  for (double xp : {0.0, 0.5, 2.0, 8.0})
    for (double r : {0.1, 0.5, 1.0, 4.0, 16.0}) {
      const Point x{{xp}, {1.0}};
      const double q = ball_volume_mc(x, r, 50000, 11).estimate / ball_volume_formula(x, r);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  CHECK(lo > 0.5);
  CHECK(hi < 8.0);
  const double v1 = ball_volume_mc(o, 1.0, 100000, 4).estimate, v2 = ball_volume_mc(o, 2.0, 100000, 4).estimate;
  CHECK(v2 / v1 <= std::pow(2.0, 3) * 1.1);
}

TEST_CASE("weight") {
  CHECK(weight(2.0, Point{{0.0}, {1.0}}, Point{{1.0}, {0.0}}) == 0.0);
  CHECK(weight(2.0, Point{{3.0}, {0.0}}, Point{{1.0}, {0.0}}) == doctest::Approx(3.0));
  CHECK(weight(2.0, Point{{3.0}, {0.0}}, Point{{0.0}, {0.0}}) == doctest::Approx(6.0));
  CHECK_THROWS_AS(weight(0.0, Point{{3.0}, {0.0}}, Point{{0.0}, {0.0}}), PreconditionError);
  const Point y{{0.7}, {0.0}};
  CHECK(weight(1.5, Point{{4.0}, {2.0}}, y) == doctest::Approx(2.0 * weight(1.5, Point{{2.0}, {2.0}}, y)));
  const double c1 = distance_bound_constant({1, 1}, 1.0, 20000, 4.0, 1);
  const double c2 = distance_bound_constant({1, 1}, 1.0, 40000, 4.0, 2);
  CHECK(c1 > 0);
  CHECK(c1 <= 1.0 + 1e-12);
  CHECK(c2 == doctest::Approx(c1).epsilon(0.1));
}

TEST_CASE("volume bound integral") {
  CHECK_THROWS_AS(volume_bound_integral(1.0, Point{{0.0}, {0.0}}, 0.5, 3.0), PreconditionError);
  CHECK_THROWS_AS(volume_bound_integral(1.0, Point{{0.0}, {0.0}}, 0.4, 1.0), PreconditionError);
  const auto big = volume_bound_integral(1.0, Point{{0.0}, {0.0}}, 0.0, 20.0);
  CHECK(std::isfinite(big.ratio));
  CHECK(big.ratio > 0);
  CHECK(big.ratio < 1.0);

  for (double yp : {0.0, 1.0, 3.0}) {
    double lo = INFINITY, hi = 0;
    for (double R : {0.25, 1.0, 4.0}) {
      const auto v = volume_bound_integral(R, Point{{yp}, {0.0}}, 0.4, 2.5);
      lo = std::min(lo, v.ratio);
      hi = std::max(hi, v.ratio);
      CHECK(v.truncation_error < 1e-3 * v.integral);
    }
    CHECK(hi / lo < 2.0);
  }
  // y = 0 is a fixed point of the dilations, so the ratio does not depend on R
  CHECK(volume_bound_integral(0.25, Point{{0.0}, {0.0}}, 0.4, 2.5).ratio ==
        doctest::Approx(volume_bound_integral(4.0, Point{{0.0}, {0.0}}, 0.4, 2.5).ratio).epsilon(1e-6));

  double prev = 0;
  for (double beta : {2.5, 2.0, 1.6, 1.3}) {
    const double r = volume_bound_integral(1.0, Point{{0.0}, {0.0}}, 0.4, beta).ratio;
    CHECK(r > prev);
    prev = r;
  }
}
