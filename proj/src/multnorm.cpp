#include "grushin/multnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "grushin/error.hpp"

namespace grushin {

namespace {

double smooth_step(double v) {
  auto f = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  if (v <= 0) return 1.0;
  if (v >= 1) return 0.0;
  const double a = f(1.0 - v), b = f(v);
  return a / (a + b);
}

}  // namespace

double bump_eta(double lambda) {
  if (lambda <= 0.5 || lambda >= 2.0) return 0.0;
  const double x = std::log2(lambda);
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

Multiplier eta_multiplier() {
  Multiplier m;
  m.fn = [](double l) -> cplx { return bump_eta(l); };
  m.support_lo = 0.5;
  m.support_hi = 2.0;
  m.label = "eta";
  return m;
}

double sobolev_norm(const Multiplier& G, double s, const SobolevConfig& cfg) {
  require(s >= 0, "Sobolev exponent s must be >= 0");
  require(std::isfinite(G.support_lo) && std::isfinite(G.support_hi) && G.support_hi > G.support_lo,
          "Sobolev norm needs a compactly supported multiplier");
  require(cfg.fourier_resolution >= 16 && cfg.padding >= 8, "Sobolev norm needs resolution >= 16 and padding >= 8");
  const double delta = 1.0 / cfg.fourier_resolution;
  const double lo = G.support_lo;
  const auto M = static_cast<std::size_t>(std::ceil((G.support_hi - lo) / delta)) + 1;
  std::size_t n = 1;
  while (n < M * static_cast<std::size_t>(cfg.padding)) n *= 2;
  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < M; ++j) buf[j] = G(lo + delta * static_cast<double>(j));
  detail::dft_batch(buf.data(), {static_cast<int>(n)}, 1, -1);
  const double L = delta * static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    const double tau = 2.0 * std::numbers::pi * kk / L;
    acc += std::pow(1.0 + tau * tau, s) * std::norm(delta * buf[k]);
  }
  return std::sqrt(acc / L);
}

std::vector<double> dyadic_grid(int k_lo, int k_hi, bool half_steps) {
  require(k_hi >= k_lo, "dyadic grid needs k_lo <= k_hi");
  std::vector<double> g;
  for (int k = k_lo; k <= k_hi; ++k) {
    g.push_back(std::ldexp(1.0, k));
    if (half_steps && k < k_hi) g.push_back(std::ldexp(std::sqrt(2.0), k));
  }
  return g;
}

double local_sobolev_norm(const Multiplier& F, const LocalNormConfig& cfg) {
  require(!cfg.t_grid.empty(), "local norm needs a nonempty t_grid");
  const double tmin = *std::min_element(cfg.t_grid.begin(), cfg.t_grid.end());
  const double tmax = *std::max_element(cfg.t_grid.begin(), cfg.t_grid.end());
  if (F.support_lo > 0) require(tmin <= F.support_lo, "t_grid must reach down to the lower end of supp F");
  if (std::isfinite(F.support_hi)) require(tmax >= F.support_hi, "t_grid must reach up to the upper end of supp F");
  const SobolevConfig sc{cfg.fourier_resolution, cfg.padding};
  const Multiplier eta = eta_multiplier();
  double best = 0.0;
  for (double t : cfg.t_grid) {
    require(t > 0, "t_grid entries must be > 0");
    Multiplier G = eta.times(F.dilated(t));
    G.support_lo = 0.5;
    G.support_hi = 2.0;
    best = std::max(best, sobolev_norm(G, cfg.s, sc));
  }
  return best;
}

double dyadic_chi(int j, double lambda) {
  if (lambda <= 0) return 0.0;
  const double u = std::log2(lambda) - j;
  return smooth_step(u) - smooth_step(u + 1.0);
}

std::vector<DyadicPiece> dyadic_pieces(const Multiplier& F, int j_min, int j_max) {
  require(j_max >= j_min, "dyadic_pieces needs j_min <= j_max");
  std::vector<DyadicPiece> out;
  for (int j = j_min; j <= j_max; ++j) {
    const double lo = std::max(F.support_lo, std::ldexp(1.0, j - 1));
    const double hi = std::min(F.support_hi, std::ldexp(1.0, j + 1));
    if (!(hi > lo)) continue;
    Multiplier p;
    auto f = F.fn;
    p.fn = [f, j](double l) { return dyadic_chi(j, l) * f(l); };
    p.support_lo = lo;
    p.support_hi = hi;
    p.negligible_above = std::min(hi, F.negligible_above);
    p.smoothness = F.smoothness;
    p.label = F.label + "_piece" + std::to_string(j);
    out.push_back({j, std::move(p)});
  }
  return out;
}

std::vector<DyadicPiece> dyadic_pieces(const Multiplier& F) {
  require(F.support_lo > 0 && std::isfinite(F.support_hi),
          "dyadic_pieces without an explicit range needs supp F inside (0, inf)");
  const int j_min = static_cast<int>(std::floor(std::log2(F.support_lo)));
  const int j_max = static_cast<int>(std::ceil(std::log2(F.support_hi)));
  return dyadic_pieces(F, j_min, j_max);
}

}  // namespace grushin
