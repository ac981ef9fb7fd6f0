#include <cmath>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/multnorm.hpp"

using namespace grushin;

namespace {

double l2_simpson(const Multiplier& G, double a, double b) {
  const int n = 200000;
  const double h = (b - a) / n;
  double s = std::norm(G(a)) + std::norm(G(b));
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * std::norm(G(a + i * h));
  return std::sqrt(s * h / 3.0);
}

Multiplier gaussian_bump() {
  Multiplier g;
  g.fn = [](double l) -> cplx { return l >= 1 && l <= 4 ? std::exp(-4.0 * (l - 2.5) * (l - 2.5)) : 0.0; };
  g.support_lo = 1;
  g.support_hi = 4;
  return g;
}

Multiplier reciprocal() {
  Multiplier g;
  g.fn = [](double l) -> cplx { return 1.0 / (1.0 + l); };
  g.support_lo = 0;
  return g;
}

}  // namespace

TEST_CASE("window") {
  CHECK(bump_eta(0.5) == 0.0);
  CHECK(bump_eta(2.0) == 0.0);
  CHECK(bump_eta(0.3) == 0.0);
  CHECK(bump_eta(2.5) == 0.0);
  CHECK(bump_eta(1.0) == doctest::Approx(1.0));
  for (double l = 0.51; l < 2.0; l += 0.01) CHECK(bump_eta(l) > 0.0);
  const auto eta = eta_multiplier();
  CHECK(eta.support_lo == 0.5);
  CHECK(eta.support_hi == 2.0);
}

TEST_CASE("Sobolev norm") {
  const auto G = bump(1.0, 4.0);
  CHECK(sobolev_norm(G, 0.0) == doctest::Approx(l2_simpson(G, 1.0, 4.0)).epsilon(1e-6));
  CHECK(sobolev_norm(G.dilated(2.0), 0.0) == doctest::Approx(sobolev_norm(G, 0.0) / std::sqrt(2.0)).epsilon(1e-6));
  const auto B = gaussian_bump();
  double prev = 0;
  for (double s : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double v = sobolev_norm(B, s);
    CHECK(v > prev);
    prev = v;
  }
  // (1+tau^2) weight at s = 1 is ||G||^2 + ||G'||^2
  const auto H1 = [&] {
    Multiplier d;
    d.fn = [](double l) -> cplx { return l >= 1 && l <= 4 ? -8.0 * (l - 2.5) * std::exp(-4.0 * (l - 2.5) * (l - 2.5)) : 0.0; };
    return std::sqrt(std::pow(l2_simpson(B, 1, 4), 2) + std::pow(l2_simpson(d, 1, 4), 2));
  }();
  CHECK(sobolev_norm(B, 1.0) == doctest::Approx(H1).epsilon(1e-3));
  CHECK_THROWS_AS(sobolev_norm(G, -0.5), PreconditionError);
  CHECK_THROWS_AS(sobolev_norm(heat(1.0), 1.0), PreconditionError);
}

TEST_CASE("local Sobolev norm") {
  LocalNormConfig cfg;
  cfg.s = 1.0;
  cfg.t_grid = dyadic_grid(-4, 4);
  const double eta_norm = sobolev_norm(eta_multiplier(), 1.0);
  CHECK(local_sobolev_norm(constant(1.0), cfg) == doctest::Approx(eta_norm).epsilon(1e-10));

  const auto F = reciprocal();
  auto fine = cfg;
  fine.t_grid = dyadic_grid(-4, 4, true);
  const double coarse_v = local_sobolev_norm(F, cfg), fine_v = local_sobolev_norm(F, fine);
  CHECK(std::fabs(fine_v - coarse_v) < 0.05 * coarse_v);

  auto shifted = cfg;
  shifted.t_grid = dyadic_grid(-3, 5);
  CHECK(local_sobolev_norm(F.dilated(2.0), cfg) == doctest::Approx(local_sobolev_norm(F, shifted)).epsilon(1e-12));

  auto s2 = cfg;
  s2.s = 1.5;
  CHECK(local_sobolev_norm(F, s2) >= local_sobolev_norm(F, cfg));

  auto narrow = cfg;
  narrow.t_grid = dyadic_grid(0, 1);
  CHECK_THROWS_AS(local_sobolev_norm(bump(1.0, 16.0), narrow), PreconditionError);

  const auto g = dyadic_grid(-1, 1, true);
  REQUIRE(g.size() == 5);
  CHECK(g[1] == doctest::Approx(std::sqrt(0.5)));
  CHECK(g[4] == 2.0);
}

TEST_CASE("dyadic partition") {
  for (double l : {0.01, 0.3, 1.0, 1.7, 3.0, 100.0}) {
    double s = 0;
    for (int j = -20; j <= 20; ++j) s += dyadic_chi(j, l);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto F = bump(1.0, 4.0);
  const auto pieces = dyadic_pieces(F);
  CHECK(pieces.size() <= 3);
  cplx at3 = 0;
  for (const auto& p : pieces) {
    CHECK(p.piece.support_lo >= std::ldexp(1.0, p.j - 1) * (1 - 1e-15));
    CHECK(p.piece.support_hi <= std::ldexp(1.0, p.j + 1) * (1 + 1e-15));
    at3 += p.piece(3.0);
  }
  CHECK(std::abs(at3 - F(3.0)) < 1e-12);

  const auto R = reciprocal();
  const auto many = dyadic_pieces(R, -6, 6);
  for (double l : {0.1, 1.0, 7.0, 20.0}) {
    cplx s = 0;
    for (const auto& p : many) s += p.piece(l);
    CHECK(std::abs(s - R(l)) < 1e-12);
  }
}
