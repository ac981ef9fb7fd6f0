#include <cmath>
#include <numbers>

#include "grushin/hermite.hpp"
#include "grushin/spectral.hpp"
#include "spectral_detail.hpp"

namespace grushin::reference {

using detail::digits;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> eta_vector(const TorusGrid& g, std::size_t m) {
  std::vector<double> e;
  for (int a : digits(m, static_cast<std::size_t>(g.params().np_points), g.dims().d1))
    e.push_back(g.eta(static_cast<std::size_t>(a)));
  return e;
}

}  // namespace

SpectralCoeffs analyze(const Field& f) {
  const auto& g = *f.grid;
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  const double P = g.params().xpp_period, A = g.params().xp_halfwidth;
  const double wpp = std::pow(P, -0.5 * d2) * std::pow(g.hpp(), d2);
  const double wp = std::pow(g.hp(), d1);
  SpectralCoeffs c(f.grid);

  std::vector<Point> pts_p, pts_pp;
  for (std::size_t i = 0; i < g.np_total(); ++i) pts_p.push_back(g.point(i, 0));
  for (std::size_t k = 0; k < g.npp_total(); ++k) pts_pp.push_back(g.point(0, k));

  auto slice = [&](const std::vector<double>& xi, std::size_t i) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < g.npp_total(); ++k) {
      const double ph = -dot(xi, pts_pp[k].xpp);
      s += f.at(i, k) * cplx(std::cos(ph), std::sin(ph));
    }
    return s * wpp;
  };

  const std::vector<double> zero_xi(static_cast<std::size_t>(d2), 0.0);
  for (std::size_t m = 0; m < g.np_total(); ++m) {
    const auto eta = eta_vector(g, m);
    cplx s = 0.0;
    for (std::size_t i = 0; i < g.np_total(); ++i) {
      const double ph = -dot(eta, pts_p[i].xp);
      s += slice(zero_xi, i) * cplx(std::cos(ph), std::sin(ph));
    }
    c.zero_mode[m] = s * wp * std::pow(2.0 * A, -0.5 * d1);
  }
  for (const auto& s : g.band()) {
    std::vector<cplx> psi(g.np_total());
    for (std::size_t i = 0; i < g.np_total(); ++i) psi[i] = slice(s.xi, i);
    for (std::size_t q = 0; q < s.count; ++q) {
      cplx a = 0.0;
      for (std::size_t i = 0; i < g.np_total(); ++i)
        a += psi[i] * scaled_hermite(g.modes()[q], pts_p[i].xp, s.xi_abs);
      c.amplitudes[s.offset + q] = a * wp;
    }
  }
  c.residual = f.norm2() - c.energy();
  return c;
}

Field synthesize(const SpectralCoeffs& c) {
  const auto& g = *c.grid;
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  const double P = g.params().xpp_period, A = g.params().xp_halfwidth;
  Field f(c.grid);
  for (std::size_t i = 0; i < g.np_total(); ++i) {
    const Point xi_pt = g.point(i, 0);
    cplx z = 0.0;
    for (std::size_t m = 0; m < g.np_total(); ++m) {
      const double ph = dot(eta_vector(g, m), xi_pt.xp);
      z += c.zero_mode[m] * cplx(std::cos(ph), std::sin(ph));
    }
    z *= std::pow(2.0 * A, -0.5 * d1);
    std::vector<cplx> psi;
    for (const auto& s : g.band()) {
      cplx v = 0.0;
      for (std::size_t q = 0; q < s.count; ++q)
        v += c.amplitudes[s.offset + q] * scaled_hermite(g.modes()[q], xi_pt.xp, s.xi_abs);
      psi.push_back(v);
    }
    for (std::size_t k = 0; k < g.npp_total(); ++k) {
      const Point x = g.point(i, k);
      cplx v = z;
      std::size_t si = 0;
      for (const auto& s : g.band()) {
        const double ph = dot(s.xi, x.xpp);
        v += psi[si++] * cplx(std::cos(ph), std::sin(ph));
      }
      f.at(i, k) = v * std::pow(P, -0.5 * d2);
    }
  }
  return f;
}

}  // namespace grushin::reference
