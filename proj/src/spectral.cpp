#include "grushin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "grushin/error.hpp"
#include "grushin/hermite.hpp"
#include "rng.hpp"
#include "spectral_detail.hpp"

namespace grushin {

namespace detail {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::vector<int> digits(std::size_t linear, std::size_t base, int count) {
  std::vector<int> d(static_cast<std::size_t>(count));
  for (int a = count - 1; a >= 0; --a) {
    d[a] = static_cast<int>(linear % base);
    linear /= base;
  }
  return d;
}

int parity_sign(std::size_t linear, std::size_t base, int count) {
  int s = 0;
  for (int a = 0; a < count; ++a) {
    s += static_cast<int>(linear % base);
    linear /= base;
  }
  return s % 2 == 0 ? 1 : -1;
}

void scaled_row(double xi_abs, double x, int L, double* out) {
  hermite_fill(L, std::sqrt(xi_abs) * x, 0.25 * std::log(xi_abs), out);
}

std::vector<cplx> contract(const std::vector<cplx>& T, std::vector<std::size_t>& shape, std::size_t axis,
                           const std::vector<double>& E, std::size_t np, std::size_t lp1, bool forward) {
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t from = shape[axis], to = forward ? lp1 : np;
  std::vector<cplx> out(outer * to * inner);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t a = 0; a < from; ++a) {
      const cplx* src = &T[(o * from + a) * inner];
      for (std::size_t b = 0; b < to; ++b) {
        const double coef = forward ? E[a * lp1 + b] : E[b * lp1 + a];
        if (coef == 0.0) continue;
        cplx* dst = &out[(o * to + b) * inner];
        for (std::size_t q = 0; q < inner; ++q) dst[q] += coef * src[q];
      }
    }
  shape[axis] = to;
  return out;
}

// E[i][l] = |xi|^{1/4} h_l(|xi|^{1/2} x_i); rows outside the support of every
// retained mode are left at zero.
std::vector<double> slot_matrix(const TorusGrid& g, const Slot& s) {
  const std::size_t np = static_cast<std::size_t>(g.params().np_points);
  const std::size_t lp1 = static_cast<std::size_t>(s.degree_max) + 1;
  std::vector<double> E(np * lp1, 0.0);
  const double cutoff = std::sqrt(2.0 * s.degree_max + 1.0) + 12.0;
  const double sx = std::sqrt(s.xi_abs);
  for (std::size_t i = 0; i < np; ++i) {
    const double x = g.xp_coord(i);
    if (std::fabs(sx * x) > cutoff) continue;
    scaled_row(s.xi_abs, x, s.degree_max, &E[i * lp1]);
  }
  return E;
}

void project_slot(const TorusGrid& g, const Slot& s, const std::vector<cplx>& psi, cplx* out) {
  const int d1 = g.dims().d1;
  const std::size_t np = static_cast<std::size_t>(g.params().np_points);
  const std::size_t lp1 = static_cast<std::size_t>(s.degree_max) + 1;
  const double w = std::pow(g.hp(), d1);
  if (d1 == 1) {
    std::vector<double> row(lp1);
    std::vector<cplx> acc(lp1);
    const double cutoff = std::sqrt(2.0 * s.degree_max + 1.0) + 12.0;
    const double sx = std::sqrt(s.xi_abs);
    for (std::size_t i = 0; i < np; ++i) {
      const double x = g.xp_coord(i);
      if (std::fabs(sx * x) > cutoff) continue;
      scaled_row(s.xi_abs, x, s.degree_max, row.data());
      const cplx v = psi[i];
      for (std::size_t l = 0; l < lp1; ++l) acc[l] += row[l] * v;
    }
    for (std::size_t l = 0; l < s.count; ++l) out[l] = w * acc[l];
    return;
  }
  const auto E = slot_matrix(g, s);
  std::vector<std::size_t> shape(static_cast<std::size_t>(d1), np);
  std::vector<cplx> T = psi;
  for (int a = 0; a < d1; ++a) T = contract(T, shape, static_cast<std::size_t>(a), E, np, lp1, true);
  const auto& modes = g.modes();
  for (std::size_t q = 0; q < s.count; ++q) {
    std::size_t idx = 0;
    for (int a = 0; a < d1; ++a) idx = idx * lp1 + static_cast<std::size_t>(modes[q][a]);
    out[q] = w * T[idx];
  }
}

std::vector<cplx> synthesize_slot(const TorusGrid& g, const Slot& s, const cplx* amp) {
  const int d1 = g.dims().d1;
  const std::size_t np = static_cast<std::size_t>(g.params().np_points);
  const std::size_t lp1 = static_cast<std::size_t>(s.degree_max) + 1;
  if (d1 == 1) {
    std::vector<cplx> psi(np);
    std::vector<double> row(lp1);
    const double cutoff = std::sqrt(2.0 * s.degree_max + 1.0) + 12.0;
    const double sx = std::sqrt(s.xi_abs);
    for (std::size_t i = 0; i < np; ++i) {
      const double x = g.xp_coord(i);
      if (std::fabs(sx * x) > cutoff) continue;
      scaled_row(s.xi_abs, x, s.degree_max, row.data());
      cplx v = 0.0;
      for (std::size_t l = 0; l < s.count; ++l) v += row[l] * amp[l];
      psi[i] = v;
    }
    return psi;
  }
  const auto E = slot_matrix(g, s);
  std::vector<std::size_t> shape(static_cast<std::size_t>(d1), lp1);
  std::vector<cplx> T(ipow(lp1, d1));
  const auto& modes = g.modes();
  for (std::size_t q = 0; q < s.count; ++q) {
    std::size_t idx = 0;
    for (int a = 0; a < d1; ++a) idx = idx * lp1 + static_cast<std::size_t>(modes[q][a]);
    T[idx] = amp[q];
  }
  for (int a = 0; a < d1; ++a) T = contract(T, shape, static_cast<std::size_t>(a), E, np, lp1, false);
  return T;
}

}  // namespace detail

using namespace detail;

namespace {

bool is_pow2(int n) { return n >= 2 && (n & (n - 1)) == 0; }

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void enumerate_layer(int d, int m, std::vector<int>& cur, int j, std::vector<std::vector<int>>& out) {
  if (j == d - 1) {
    cur[j] = m;
    out.push_back(cur);
    return;
  }
  for (int a = m; a >= 0; --a) {
    cur[j] = a;
    enumerate_layer(d, m - a, cur, j + 1, out);
  }
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

TorusGrid::TorusGrid(GridParams p) : p_(std::move(p)) {
  const auto& d = p_.dims;
  d.validate();
  require(p_.xp_halfwidth > 0, "grid needs x'_halfwidth > 0");
  require(p_.xpp_period > 0, "grid needs x''_period > 0");
  require(is_pow2(p_.np_points), "n'_points must be a power of two (>= 2)");
  require(is_pow2(p_.npp_points), "n''_points must be a power of two (>= 2)");
  require(p_.hermite_cutoff >= d.d1, "hermite_cutoff N_max must be >= d1");
  require(p_.resolution_margin >= 0, "resolution_margin must be >= 0");
  const double lhs = std::sqrt(2.0 * std::numbers::pi / p_.xpp_period) * p_.xp_halfwidth;
  const double rhs = std::sqrt(2.0 * p_.hermite_cutoff + d.d1) + 6.0;
  require(lhs >= rhs, "grid invariant |xi|_min^{1/2} * x'_halfwidth >= sqrt(2 N_max + d1) + 6 violated (" +
                          fmt(lhs) + " < " + fmt(rhs) + ")");
  np_total_ = ipow(static_cast<std::size_t>(p_.np_points), d.d1);
  npp_total_ = ipow(static_cast<std::size_t>(p_.npp_points), d.d2);

  const int n_top = p_.hermite_cutoff - ((p_.hermite_cutoff - d.d1) % 2);
  const int m_top = (n_top - d.d1) / 2;
  std::vector<int> cur(static_cast<std::size_t>(d.d1));
  for (int m = 0; m <= m_top; ++m) enumerate_layer(d.d1, m, cur, 0, modes_);

  const double unit = 2.0 * std::numbers::pi / p_.xpp_period;
  const std::size_t npp = static_cast<std::size_t>(p_.npp_points);
  std::size_t offset = 0;
  for (std::size_t j = 1; j < npp_total_; ++j) {
    const auto dig = digits(j, npp, d.d2);
    Slot s;
    bool nyquist = false;
    for (int a : dig) {
      if (static_cast<std::size_t>(a) == npp / 2) nyquist = true;
      const int k = static_cast<std::size_t>(a) < npp / 2 ? a : a - static_cast<int>(npp);
      s.k.push_back(k);
      s.xi.push_back(unit * k);
    }
    s.xi_abs = norm(s.xi);
    const double q = std::numbers::pi / (std::sqrt(s.xi_abs) * hp()) - p_.resolution_margin;
    if (nyquist || q < 1.0) {
      excluded_.push_back(s.k);
      excluded_xi_abs_.push_back(s.xi_abs);
      continue;
    }
    const double lmax = std::floor((q * q - 1.0) / 2.0);
    int layer = lmax >= m_top ? n_top : std::min(n_top, 2 * static_cast<int>(lmax) + d.d1);
    s.layer_max = layer;
    s.degree_max = (layer - d.d1) / 2;
    s.count = binom(static_cast<std::size_t>(s.degree_max + d.d1), static_cast<std::size_t>(d.d1));
    s.offset = offset;
    s.fft_index = j;
    offset += s.count;
    slots_.push_back(std::move(s));
  }
  amplitude_count_ = offset;
}

GridPtr make_grid(GridParams p) { return std::make_shared<const TorusGrid>(std::move(p)); }

double TorusGrid::xi_min() const { return 2.0 * std::numbers::pi / p_.xpp_period; }
double TorusGrid::xi_nyquist() const { return xi_min() * (p_.npp_points / 2); }
double TorusGrid::cell_volume() const { return std::pow(hp(), dims().d1) * std::pow(hpp(), dims().d2); }

double TorusGrid::resolved_lambda_max(ZeroModePolicy policy) const {
  double lam = std::numeric_limits<double>::infinity();
  const int d1 = dims().d1;
  for (const auto& s : slots_) lam = std::min(lam, s.xi_abs * (s.layer_max + 2));
  for (double x : excluded_xi_abs_) lam = std::min(lam, x * d1);
  if (policy == ZeroModePolicy::euclidean) {
    const double eta_ny = std::numbers::pi * (p_.np_points / 2) / p_.xp_halfwidth;
    lam = std::min(lam, eta_ny * eta_ny);
  }
  return lam;
}

double TorusGrid::band_xi_max() const {
  double m = 0.0;
  for (const auto& s : slots_) m = std::max(m, s.xi_abs);
  return m;
}

std::shared_ptr<const TorusGrid> TorusGrid::dilated(double s) const {
  require(s > 0, "grid dilation needs s > 0");
  GridParams q = p_;
  q.xp_halfwidth *= s;
  q.xpp_period *= s * s;
  return make_grid(q);
}

double TorusGrid::eta(std::size_t j) const {
  const std::size_t np = static_cast<std::size_t>(p_.np_points);
  const double m = j < np / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(np);
  return std::numbers::pi * m / p_.xp_halfwidth;
}

Point TorusGrid::point(std::size_t xp_linear, std::size_t xpp_linear) const {
  Point x;
  for (int a : digits(xp_linear, static_cast<std::size_t>(p_.np_points), dims().d1))
    x.xp.push_back(xp_coord(static_cast<std::size_t>(a)));
  for (int a : digits(xpp_linear, static_cast<std::size_t>(p_.npp_points), dims().d2))
    x.xpp.push_back(xpp_coord(static_cast<std::size_t>(a)));
  return x;
}

Field::Field(GridPtr g) : grid(std::move(g)), samples(grid->samples()) {}
Field::Field(GridPtr g, std::vector<cplx> s) : grid(std::move(g)), samples(std::move(s)) {
  require(samples.size() == grid->samples(), "field sample count must equal n'^d1 * n''^d2");
}

double Field::norm2() const {
  double s = 0.0;
  for (const auto& v : samples) s += std::norm(v);
  return s * grid->cell_volume();
}

double Field::l1() const {
  double s = 0.0;
  for (const auto& v : samples) s += std::abs(v);
  return s * grid->cell_volume();
}

SpectralCoeffs::SpectralCoeffs(GridPtr g)
    : grid(std::move(g)), amplitudes(grid->amplitude_count()), zero_mode(grid->np_total()) {}

double SpectralCoeffs::energy() const {
  double s = 0.0;
  for (const auto& v : amplitudes) s += std::norm(v);
  for (const auto& v : zero_mode) s += std::norm(v);
  return s;
}

bool SpectralCoeffs::zero_mode_empty() const {
  return std::all_of(zero_mode.begin(), zero_mode.end(), [](const cplx& v) { return v == 0.0; });
}

Field zero_field(GridPtr g) { return Field(std::move(g)); }

SpectralCoeffs analyze(const Field& f) {
  const auto& g = *f.grid;
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  const std::size_t npp_total = g.npp_total(), np_total = g.np_total();
  std::vector<cplx> work = f.samples;
  dft_batch(work.data(), std::vector<int>(static_cast<std::size_t>(d2), g.params().npp_points), np_total, -1);
  const double scale = std::pow(g.params().xpp_period, -0.5 * d2) * std::pow(g.hpp(), d2);

  SpectralCoeffs c(f.grid);
  for (std::size_t i = 0; i < np_total; ++i) c.zero_mode[i] = work[i * npp_total] * scale;
  dft_batch(c.zero_mode.data(), std::vector<int>(static_cast<std::size_t>(d1), g.params().np_points), 1, -1);
  const double zscale = std::pow(g.hp(), d1) * std::pow(2.0 * g.params().xp_halfwidth, -0.5 * d1);
  const std::size_t np = static_cast<std::size_t>(g.params().np_points);
  for (std::size_t m = 0; m < np_total; ++m) c.zero_mode[m] *= zscale * parity_sign(m, np, d1);

  const auto& slots = g.band();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t si = 0; si < slots.size(); ++si) {
    const auto& s = slots[si];
    std::vector<cplx> psi(np_total);
    for (std::size_t i = 0; i < np_total; ++i) psi[i] = work[i * npp_total + s.fft_index] * scale;
    project_slot(g, s, psi, &c.amplitudes[s.offset]);
  }
  c.residual = f.norm2() - c.energy();
  return c;
}

Field synthesize(const SpectralCoeffs& c) {
  const auto& g = *c.grid;
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  const std::size_t npp_total = g.npp_total(), np_total = g.np_total();
  const std::size_t np = static_cast<std::size_t>(g.params().np_points);
  std::vector<cplx> work(g.samples());

  std::vector<cplx> z(np_total);
  for (std::size_t m = 0; m < np_total; ++m) z[m] = c.zero_mode[m] * static_cast<double>(parity_sign(m, np, d1));
  dft_batch(z.data(), std::vector<int>(static_cast<std::size_t>(d1), g.params().np_points), 1, +1);
  const double zscale = std::pow(2.0 * g.params().xp_halfwidth, -0.5 * d1);
  for (std::size_t i = 0; i < np_total; ++i) work[i * npp_total] = z[i] * zscale;

  const auto& slots = g.band();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t si = 0; si < slots.size(); ++si) {
    const auto& s = slots[si];
    const auto psi = synthesize_slot(g, s, &c.amplitudes[s.offset]);
    for (std::size_t i = 0; i < np_total; ++i) work[i * npp_total + s.fft_index] = psi[i];
  }
  dft_batch(work.data(), std::vector<int>(static_cast<std::size_t>(d2), g.params().npp_points), np_total, +1);
  const double scale = std::pow(g.params().xpp_period, -0.5 * d2);
  for (auto& v : work) v *= scale;
  return Field(c.grid, std::move(work));
}

std::vector<double> eigenvalue(std::span<const int> n, std::span<const double> xi) {
  const double a = norm(xi);
  require(a > 0, "eigenvalue needs xi != 0");
  std::vector<double> out;
  for (int nj : n) {
    require(nj >= 0, "multi-index entries must be >= 0");
    out.push_back(a * (2.0 * nj + 1.0));
  }
  return out;
}

double l_eigenvalue(std::span<const int> n, double xi_abs) {
  int s = 0;
  for (int nj : n) s += nj;
  return xi_abs * (2.0 * s + static_cast<double>(n.size()));
}

SpectralCoeffs apply_joint(const JointMultiplier& G, const SpectralCoeffs& c) {
  require(G.xi_abs_min > 0, "joint multiplier must be supported away from xi = 0 (xi_abs_min > 0)");
  SpectralCoeffs out = c;
  const auto& g = *c.grid;
  const auto& modes = g.modes();
  std::vector<double> lam(static_cast<std::size_t>(g.dims().d1));
  for (const auto& s : g.band())
    for (std::size_t q = 0; q < s.count; ++q) {
      for (std::size_t j = 0; j < lam.size(); ++j) lam[j] = s.xi_abs * (2.0 * modes[q][j] + 1.0);
      out.amplitudes[s.offset + q] *= G.fn(lam, s.xi);
    }
  out.zero_mode_passthrough = true;
  return out;
}

double detail::zero_mode_lambda(const TorusGrid& g, std::size_t m) {
  const std::size_t np = static_cast<std::size_t>(g.params().np_points);
  double e2 = 0.0;
  for (int a : digits(m, np, g.dims().d1)) {
    const double e = g.eta(static_cast<std::size_t>(a));
    e2 += e * e;
  }
  return e2;
}

SpectralCoeffs apply_L(const Multiplier& F, const SpectralCoeffs& c, ZeroModePolicy policy) {
  SpectralCoeffs out = c;
  const auto& g = *c.grid;
  const auto& modes = g.modes();
  for (const auto& s : g.band())
    for (std::size_t q = 0; q < s.count; ++q) out.amplitudes[s.offset + q] *= F(l_eigenvalue(modes[q], s.xi_abs));
  for (std::size_t m = 0; m < out.zero_mode.size(); ++m)
    out.zero_mode[m] = policy == ZeroModePolicy::euclidean ? out.zero_mode[m] * F(zero_mode_lambda(g, m)) : 0.0;
  out.zero_mode_passthrough = false;
  return out;
}

SpectralCoeffs apply_T_power(double sigma, const SpectralCoeffs& c) {
  if (sigma < 0)
    require(c.zero_mode_empty(), "|T|^sigma with sigma < 0 is undefined on a nonzero xi = 0 block");
  SpectralCoeffs out = c;
  for (const auto& s : c.grid->band()) {
    const double f = std::pow(s.xi_abs, sigma);
    for (std::size_t q = 0; q < s.count; ++q) out.amplitudes[s.offset + q] *= f;
  }
  if (sigma > 0) std::fill(out.zero_mode.begin(), out.zero_mode.end(), cplx(0.0));
  return out;
}

Field apply_P_power(double gamma, const Field& f) {
  require(gamma >= 0, "|P|^gamma needs gamma >= 0");
  Field out = f;
  if (gamma == 0) return out;
  const auto& g = *f.grid;
  const std::size_t np = static_cast<std::size_t>(g.params().np_points);
  for (std::size_t i = 0; i < g.np_total(); ++i) {
    double r2 = 0.0;
    for (int a : digits(i, np, g.dims().d1)) {
      const double x = g.xp_coord(static_cast<std::size_t>(a));
      r2 += x * x;
    }
    const double w = std::pow(std::sqrt(r2), gamma);
    for (std::size_t k = 0; k < g.npp_total(); ++k) out.at(i, k) *= w;
  }
  return out;
}

void require_resolved(const Multiplier& F, const TorusGrid& g, ZeroModePolicy policy) {
  const double hi = F.effective_hi();
  const double lam = g.resolved_lambda_max(policy);
  require(hi < lam, "spectral clipping: multiplier " + F.label + " reaches lambda = " + fmt(hi) +
                        " but the band resolves only lambda < " + fmt(lam));
}

namespace {

cplx F_at(const Multiplier& F, double lambda) { return F.in_support(lambda) ? F(lambda) : cplx(0.0); }

// Per-axis values h~_l(y_j, xi) for l <= L, stored axis-major.
std::vector<double> axis_values(const Slot& s, std::span<const double> y) {
  const std::size_t lp1 = static_cast<std::size_t>(s.degree_max) + 1;
  std::vector<double> v(y.size() * lp1);
  for (std::size_t j = 0; j < y.size(); ++j) scaled_row(s.xi_abs, y[j], s.degree_max, &v[j * lp1]);
  return v;
}

void check_point(const Point& y, const TorusGrid& g) {
  require(y.dims() == g.dims(), "point dimensions must match the grid");
  for (double v : y.xp)
    require(std::fabs(v) <= g.params().xp_halfwidth, "kernel point y must lie inside the x' box");
}

}  // namespace

SpectralCoeffs kernel_coefficients(const Multiplier& F, const Point& y, GridPtr gp, ZeroModePolicy policy) {
  const auto& g = *gp;
  check_point(y, g);
  SpectralCoeffs c(gp);
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  const double pre = std::pow(g.params().xpp_period, -0.5 * d2);
  const auto& modes = g.modes();
  const auto& slots = g.band();
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t si = 0; si < slots.size(); ++si) {
    const auto& s = slots[si];
    if (F.support_lo > s.xi_abs * s.layer_max || F.effective_hi() < s.xi_abs * d1) continue;
    double phase = 0.0;
    for (int j = 0; j < d2; ++j) phase -= s.xi[j] * y.xpp[j];
    const cplx e = pre * cplx(std::cos(phase), std::sin(phase));
    const auto hv = axis_values(s, y.xp);
    const std::size_t lp1 = static_cast<std::size_t>(s.degree_max) + 1;
    for (std::size_t q = 0; q < s.count; ++q) {
      const cplx f = F_at(F, l_eigenvalue(modes[q], s.xi_abs));
      if (f == 0.0) continue;
      double h = 1.0;
      for (int j = 0; j < d1; ++j) h *= hv[j * lp1 + modes[q][j]];
      c.amplitudes[s.offset + q] = f * h * e;
    }
  }
  if (policy == ZeroModePolicy::euclidean) {
    const std::size_t np = static_cast<std::size_t>(g.params().np_points);
    const double zs = pre * std::pow(2.0 * g.params().xp_halfwidth, -0.5 * d1);
    for (std::size_t m = 0; m < c.zero_mode.size(); ++m) {
      const auto dig = digits(m, np, d1);
      double e2 = 0.0, ph = 0.0;
      for (int j = 0; j < d1; ++j) {
        const double eta = g.eta(static_cast<std::size_t>(dig[j]));
        e2 += eta * eta;
        ph -= eta * y.xp[j];
      }
      c.zero_mode[m] = zs * F_at(F, e2) * cplx(std::cos(ph), std::sin(ph));
    }
  }
  return c;
}

Field kernel_column(const Multiplier& F, const Point& y, GridPtr g, ZeroModePolicy policy) {
  return synthesize(kernel_coefficients(F, y, std::move(g), policy));
}

namespace {

// sum over n with 2|n| + d = 2m + d of prod_j p_j[n_j], for every m <= M.
std::vector<double> layer_products(const std::vector<double>& p, std::size_t lp1, int d, int M) {
  const std::size_t K = static_cast<std::size_t>(M) + 1;
  std::vector<double> acc(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(K)), next;
  for (int j = 1; j < d; ++j) {
    next.assign(K, 0.0);
    const double* pj = &p[static_cast<std::size_t>(j) * lp1];
    for (std::size_t a = 0; a < K; ++a) {
      if (acc[a] == 0.0) continue;
      for (std::size_t b = 0; a + b < K; ++b) next[a + b] += acc[a] * pj[b];
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace

cplx kernel_value(const Multiplier& F, const Point& x, const Point& y, const TorusGrid& g, ZeroModePolicy policy) {
  check_point(y, g);
  check_point(x, g);
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  const double hi = F.effective_hi();
  const auto& slots = g.band();
  std::vector<cplx> partial(slots.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t si = 0; si < slots.size(); ++si) {
    const auto& s = slots[si];
    if (F.support_lo > s.xi_abs * s.layer_max || hi < s.xi_abs * d1) continue;
    // only layers with |xi| N <= hi can contribute
    const double top = std::min<double>(s.degree_max, std::floor((hi / s.xi_abs - d1) / 2.0));
    Slot t = s;
    t.degree_max = static_cast<int>(top);
    const std::size_t lp1 = static_cast<std::size_t>(t.degree_max) + 1;
    auto hx = axis_values(t, x.xp);
    const auto hy = axis_values(t, y.xp);
    for (std::size_t q = 0; q < hx.size(); ++q) hx[q] *= hy[q];
    const auto layers = layer_products(hx, lp1, d1, t.degree_max);
    cplx acc = 0.0;
    for (int m = 0; m <= t.degree_max; ++m) acc += F_at(F, s.xi_abs * (2.0 * m + d1)) * layers[m];
    double phase = 0.0;
    for (int j = 0; j < d2; ++j) phase += s.xi[j] * (x.xpp[j] - y.xpp[j]);
    partial[si] = acc * cplx(std::cos(phase), std::sin(phase));
  }
  cplx total = 0.0;
  for (const auto& v : partial) total += v;
  if (policy == ZeroModePolicy::euclidean) {
    const double A = g.params().xp_halfwidth;
    const long half = g.params().np_points / 2;
    const long mcap = std::isfinite(hi) ? std::min<long>(half, static_cast<long>(std::sqrt(hi) * A / std::numbers::pi) + 1) : half;
    cplx z = 0.0;
    std::vector<long> m(static_cast<std::size_t>(d1), -mcap);
    const long lo = -std::min(mcap, half);
    const long top = std::min(mcap, half - 1);
    std::fill(m.begin(), m.end(), lo);
    while (true) {
      double e2 = 0.0, ph = 0.0;
      for (int j = 0; j < d1; ++j) {
        const double eta = std::numbers::pi * static_cast<double>(m[j]) / A;
        e2 += eta * eta;
        ph += eta * (x.xp[j] - y.xp[j]);
      }
      z += F_at(F, e2) * cplx(std::cos(ph), std::sin(ph));
      int j = d1 - 1;
      while (j >= 0 && m[j] == top) m[j--] = lo;
      if (j < 0) break;
      ++m[j];
    }
    total += z * std::pow(2.0 * A, -d1);
  }
  return total * std::pow(g.params().xpp_period, -d2);
}

double kernel_plancherel_sum(const Multiplier& F, const Point& y, const TorusGrid& g, ZeroModePolicy policy) {
  check_point(y, g);
  const int d1 = g.dims().d1, d2 = g.dims().d2;
  double total = 0.0;
  std::vector<double> v(static_cast<std::size_t>(d1));
  for (const auto& s : g.band()) {
    if (F.support_lo > s.xi_abs * s.layer_max || F.effective_hi() < s.xi_abs * d1) continue;
    const double sx = std::sqrt(s.xi_abs);
    for (int j = 0; j < d1; ++j) v[j] = sx * y.xp[j];
    const auto H = layer_sums_upto(d1, s.layer_max, v);
    double acc = 0.0;
    for (std::size_t m = 0; m < H.size(); ++m)
      acc += std::norm(F_at(F, s.xi_abs * (2.0 * m + d1))) * H[m];
    total += acc * std::pow(s.xi_abs, 0.5 * d1);
  }
  if (policy == ZeroModePolicy::euclidean) {
    double z = 0.0;
    for (std::size_t m = 0; m < g.np_total(); ++m) z += std::norm(F_at(F, zero_mode_lambda(g, m)));
    total += z * std::pow(2.0 * g.params().xp_halfwidth, -d1);
  }
  return total * std::pow(g.params().xpp_period, -d2);
}

SpectralCoeffs random_band_limited(GridPtr gp, std::uint64_t seed, const RandomFieldOptions& opt) {
  const auto& g = *gp;
  SpectralCoeffs c(gp);
  Rng rng(seed);
  auto draw = [&] {
    const double a = rng.normal(), b = rng.normal();
    return cplx(a, b) * std::sqrt(0.5);
  };
  std::vector<std::size_t> eligible;
  const auto& modes = g.modes();
  for (const auto& s : g.band()) {
    if (opt.max_lattice >= 0) {
      int kinf = 0;
      for (int k : s.k) kinf = std::max(kinf, std::abs(k));
      if (kinf > opt.max_lattice) continue;
    }
    for (std::size_t q = 0; q < s.count; ++q) {
      int deg = 0;
      for (int n : modes[q]) deg += n;
      if (opt.max_degree >= 0 && deg > opt.max_degree) continue;
      eligible.push_back(s.offset + q);
    }
  }
  require(!eligible.empty(), "random field options leave no eligible modes");
  if (opt.modes == 0 || opt.modes >= eligible.size()) {
    for (std::size_t idx : eligible) c.amplitudes[idx] = draw();
  } else {
    for (std::size_t r = 0; r < opt.modes; ++r) {
      // partial Fisher-Yates
      const std::size_t j = r + static_cast<std::size_t>(rng.uniform() * static_cast<double>(eligible.size() - r));
      std::swap(eligible[r], eligible[std::min(j, eligible.size() - 1)]);
      c.amplitudes[eligible[r]] = draw();
    }
  }
  if (opt.zero_mode)
    for (auto& z : c.zero_mode) z = draw();
  return c;
}

}  // namespace grushin
