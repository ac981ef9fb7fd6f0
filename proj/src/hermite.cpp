#include "grushin/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "grushin/error.hpp"

namespace grushin {

namespace {

const double kH0 = std::pow(std::numbers::pi, -0.25);
constexpr double kBig = 0x1p600;
constexpr double kBigLog = 600.0 * std::numbers::ln2;

inline double unscale(double p, double log_scale) {
  if (log_scale > -700.0) return p * std::exp(log_scale);
  if (p == 0.0) return 0.0;
  return std::copysign(std::exp(log_scale + std::log(std::fabs(p))), p);
}

// The recurrence runs on a mantissa with the Gaussian factor kept as a
// separate exponent; the mantissa is renormalized whenever it gets large.
void recurrence(int L, double t, double log_gain, double* out) {
  double log_scale = -0.5 * t * t + log_gain;
  double prev = 0.0;
  double cur = kH0;
  out[0] = unscale(cur, log_scale);
  for (int l = 0; l < L; ++l) {
    const double next = std::sqrt(2.0 / (l + 1)) * t * cur - std::sqrt(static_cast<double>(l) / (l + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::fabs(cur) > kBig) {
      cur /= kBig;
      prev /= kBig;
      log_scale += kBigLog;
    }
    out[l + 1] = unscale(cur, log_scale);
  }
}

// H_{d, 2m+d}(v), only the top layer of the convolution.
double layer_top(int d, int m, std::span<const double> v, std::vector<double>& scratch_h,
                 std::vector<double>& acc, std::vector<double>& next) {
  scratch_h.resize(static_cast<std::size_t>(m) + 1);
  acc.assign(static_cast<std::size_t>(m) + 1, 0.0);
  recurrence(m, v[0], 0.0, scratch_h.data());
  for (int k = 0; k <= m; ++k) acc[k] = scratch_h[k] * scratch_h[k];
  for (int j = 1; j < d; ++j) {
    recurrence(m, v[j], 0.0, scratch_h.data());
    for (auto& h : scratch_h) h *= h;
    if (j == d - 1) {
      double s = 0.0;
      for (int k = 0; k <= m; ++k) s += acc[k] * scratch_h[m - k];
      return s;
    }
    next.assign(static_cast<std::size_t>(m) + 1, 0.0);
    for (int a = 0; a <= m; ++a)
      for (int b = 0; a + b <= m; ++b) next[a + b] += acc[a] * scratch_h[b];
    acc.swap(next);
  }
  return acc[m];
}

double norm2(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double hermite_eval(int l, double t) {
  require(l >= 0, "hermite degree must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(l) + 1);
  recurrence(l, t, 0.0, out.data());
  return out.back();
}

void hermite_fill(int L, double t, double log_gain, double* out) { recurrence(L, t, log_gain, out); }

std::vector<double> hermite_all(int L, double t) { return hermite_all_gain(L, t, 0.0); }

std::vector<double> hermite_all_gain(int L, double t, double log_gain) {
  require(L >= 0, "hermite degree must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(L) + 1);
  recurrence(L, t, log_gain, out.data());
  return out;
}

HermiteTable HermiteTable::uniform(int max_degree, double T, std::size_t n_points) {
  require(max_degree >= 0, "hermite degree must be >= 0");
  require(T > 0 && n_points >= 2, "table needs T > 0 and at least two points");
  HermiteTable tab;
  tab.max_degree = max_degree;
  tab.points.resize(n_points);
  tab.quad_weights.assign(n_points, 2.0 * T / static_cast<double>(n_points - 1));
  tab.quad_weights.front() *= 0.5;
  tab.quad_weights.back() *= 0.5;
  tab.values.resize(static_cast<std::size_t>(max_degree + 1) * n_points);
  std::vector<double> col(static_cast<std::size_t>(max_degree) + 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = -T + 2.0 * T * static_cast<double>(i) / static_cast<double>(n_points - 1);
    tab.points[i] = t;
    recurrence(max_degree, t, 0.0, col.data());
    for (int l = 0; l <= max_degree; ++l) tab.values[static_cast<std::size_t>(l) * n_points + i] = col[l];
  }
  return tab;
}

HermiteTable HermiteTable::for_degree(int max_degree, std::size_t points_per_unit) {
  const double T = std::sqrt(2.0 * max_degree + 1.0) + 8.0;
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * T * static_cast<double>(points_per_unit))) + 1;
  return uniform(max_degree, T, n);
}

int HermiteTable::resolved_degree() const {
  const double T = std::min(-points.front(), points.back());
  int l = -1;
  while (l < max_degree && std::sqrt(2.0 * (l + 1) + 1.0) <= T) ++l;
  return l;
}

double HermiteTable::gram_error(int up_to) const {
  up_to = std::min(up_to, max_degree);
  const std::size_t n = points.size();
  double worst = 0.0;
  for (int a = 0; a <= up_to; ++a)
    for (int b = a; b <= up_to; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += quad_weights[i] * at(a, i) * at(b, i);
      worst = std::max(worst, std::fabs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

double HermiteTable::recurrence_residual() const {
  double worst = 0.0;
  for (int l = 0; l < max_degree; ++l)
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double t = points[i];
      const double lower = l > 0 ? at(l - 1, i) : 0.0;
      const double r = at(l + 1, i) - std::sqrt(2.0 / (l + 1)) * t * at(l, i) +
                       std::sqrt(static_cast<double>(l) / (l + 1)) * lower;
      worst = std::max(worst, std::fabs(r) / std::max(1.0, std::fabs(at(l, i))));
    }
  return worst;
}

double HermiteTable::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

double scaled_hermite(std::span<const int> n, std::span<const double> u, std::span<const double> xi) {
  return scaled_hermite(n, u, norm2(xi));
}

double scaled_hermite(std::span<const int> n, std::span<const double> u, double xi_abs) {
  require(xi_abs > 0, "scaled Hermite basis needs xi != 0");
  require(n.size() == u.size(), "multi-index and point must have the same length");
  const double s = std::sqrt(xi_abs);
  double v = std::pow(xi_abs, 0.25 * static_cast<double>(n.size()));
  for (std::size_t j = 0; j < n.size(); ++j) v *= hermite_eval(n[j], s * u[j]);
  return v;
}

void validate_layer(int d, int N) {
  require(d >= 1, "layer dimension d must be >= 1");
  require(N >= d && (N - d) % 2 == 0, "layer index N must satisfy N >= d and N = d mod 2");
}

double layer_sum(const LayerSumQuery& q) { return layer_sum(q.d, q.N, q.u); }

double layer_sum(int d, int N, std::span<const double> u) {
  validate_layer(d, N);
  require(static_cast<int>(u.size()) == d, "layer point must have length d");
  std::vector<double> h, acc, next;
  return layer_top(d, (N - d) / 2, u, h, acc, next);
}

std::vector<double> layer_sums_upto(int d, int N_max, std::span<const double> u) {
  validate_layer(d, N_max);
  require(static_cast<int>(u.size()) == d, "layer point must have length d");
  const int K = (N_max - d) / 2;
  std::vector<double> h(static_cast<std::size_t>(K) + 1), acc(static_cast<std::size_t>(K) + 1), next;
  recurrence(K, u[0], 0.0, h.data());
  for (int k = 0; k <= K; ++k) acc[k] = h[k] * h[k];
  for (int j = 1; j < d; ++j) {
    recurrence(K, u[j], 0.0, h.data());
    for (auto& x : h) x *= x;
    next.assign(static_cast<std::size_t>(K) + 1, 0.0);
    for (int a = 0; a <= K; ++a) {
      if (acc[a] == 0.0) continue;
      for (int b = 0; a + b <= K; ++b) next[a + b] += acc[a] * h[b];
    }
    acc.swap(next);
  }
  return acc;
}

std::int64_t multiplicity(int d, int N) {
  validate_layer(d, N);
  const std::int64_t m = (N - d) / 2;
  std::int64_t r = 1;
  for (std::int64_t k = 1; k <= d - 1; ++k) r = r * (m + k) / k;
  return r;
}

EstimateReport muckenhoupt_constant(int N_max, std::span<const double> u_grid, double c) {
  require(N_max >= 1, "N_max must be >= 1");
  require(!u_grid.empty(), "u_grid must be nonempty");
  const int n_max = (N_max - 1) / 2;
  struct Best {
    double v = -1, N = -1, u = 0, ev = -1, eN = -1, eu = 0;
  };
  std::vector<Best> best(u_grid.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double u = u_grid[i];
    std::vector<double> h(static_cast<std::size_t>(n_max) + 1), g(h.size());
    recurrence(n_max, u, 0.0, h.data());
    recurrence(n_max, u, 0.5 * c * u * u, g.data());
    Best b;
    for (int n = 0; n <= n_max; ++n) {
      const double N = 2.0 * n + 1.0;
      const double v = h[n] * h[n] * std::sqrt(std::cbrt(N) + std::fabs(u * u - N));
      if (v > b.v) b.v = v, b.N = N, b.u = u;
      if (u * u >= 2.0 * N && g[n] * g[n] > b.ev) b.ev = g[n] * g[n], b.eN = N, b.eu = u;
    }
    best[i] = b;
  }
  Best all;
  for (const auto& b : best) {
    if (b.v > all.v) all.v = b.v, all.N = b.N, all.u = b.u;
    if (b.ev > all.ev) all.ev = b.ev, all.eN = b.eN, all.eu = b.eu;
  }
  EstimateReport rep("muckenhoupt_constant", {"N_max", "c"},
                     {"sup", "argmax_N", "argmax_u", "exp_sup", "exp_argmax_N", "exp_argmax_u"});
  rep.add_row({static_cast<double>(N_max), c},
              {all.v, all.N, all.u, std::max(all.ev, 0.0), all.eN, all.eu});
  rep.summary["sup"] = all.v;
  rep.summary["exp_sup"] = std::max(all.ev, 0.0);
  return rep;
}

EstimateReport higher_layer_constant(int d, int N_max, const std::vector<std::vector<double>>& u_grid, double c) {
  require(d >= 2, "higher_layer_constant needs d >= 2 (use muckenhoupt_constant for d = 1)");
  validate_layer(d, N_max);
  require(!u_grid.empty(), "u_grid must be nonempty");
  for (const auto& u : u_grid) require(static_cast<int>(u.size()) == d, "grid points must have length d");
  struct Best {
    double v = -1, N = -1, idx = -1, ev = -1, eN = -1, eidx = -1;
  };
  std::vector<Best> best(u_grid.size());
  const int K = (N_max - d) / 2;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const auto& u = u_grid[i];
    const auto H = layer_sums_upto(d, N_max, u);
    std::size_t jinf = 0;
    for (std::size_t j = 1; j < u.size(); ++j)
      if (std::fabs(u[j]) > std::fabs(u[jinf])) jinf = j;
    const double uinf = std::fabs(u[jinf]);
    // exp(c |u|_inf^2) is carried by the coordinate attaining the max.
    std::vector<double> Hg;
    if (uinf > 0) {
      std::vector<double> h(static_cast<std::size_t>(K) + 1), acc(h.size()), next;
      recurrence(K, u[jinf], 0.5 * c * uinf * uinf, h.data());
      for (int k = 0; k <= K; ++k) acc[k] = h[k] * h[k];
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (j == jinf) continue;
        recurrence(K, u[j], 0.0, h.data());
        for (auto& x : h) x *= x;
        next.assign(static_cast<std::size_t>(K) + 1, 0.0);
        for (int a = 0; a <= K; ++a)
          for (int b = 0; a + b <= K; ++b) next[a + b] += acc[a] * h[b];
        acc.swap(next);
      }
      Hg = std::move(acc);
    }
    Best b;
    for (int k = 0; k <= K; ++k) {
      const double N = d + 2.0 * k;
      const double v = H[k] * std::pow(N, 1.0 - 0.5 * d);
      if (v > b.v) b.v = v, b.N = N, b.idx = static_cast<double>(i);
      if (!Hg.empty() && uinf * uinf >= 2.0 * N && Hg[k] > b.ev)
        b.ev = Hg[k], b.eN = N, b.eidx = static_cast<double>(i);
    }
    best[i] = b;
  }
  Best all;
  for (const auto& b : best) {
    if (b.v > all.v) all.v = b.v, all.N = b.N, all.idx = b.idx;
    if (b.ev > all.ev) all.ev = b.ev, all.eN = b.eN, all.eidx = b.eidx;
  }
  EstimateReport rep("higher_layer_constant", {"d", "N_max", "c"},
                     {"sup", "argmax_N", "argmax_index", "exp_sup", "exp_argmax_N", "exp_argmax_index"});
  rep.add_row({static_cast<double>(d), static_cast<double>(N_max), c},
              {all.v, all.N, all.idx, std::max(all.ev, 0.0), all.eN, all.eidx});
  rep.summary["sup"] = all.v;
  rep.summary["exp_sup"] = std::max(all.ev, 0.0);
  return rep;
}

TailConstants default_tail_constants(int d) {
  require(d >= 1, "layer dimension d must be >= 1");
  static std::mutex mu;
  static std::map<int, TailConstants> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(d); it != cache.end()) return it->second;
  TailConstants k;
  if (d == 1) {
    std::vector<double> grid;
    for (double u = 0.0; u <= 46.0; u += 0.005) grid.push_back(u);
    k.layer = muckenhoupt_constant(1001, grid).summary.at("sup");
  } else {
    const int N_cap = d == 2 ? 120 : 60 + d;
    const int N_top = N_cap - ((N_cap - d) % 2);
    const double R = std::sqrt(2.0 * N_top) + 3.0;
    std::vector<std::vector<double>> grid;
    if (d == 2) {
      for (double a = 0.0; a <= R; a += 0.2)
        for (double b = 0.0; b <= a + 1e-12; b += 0.2) grid.push_back({a, b});
    } else {
      for (double r = 0.0; r <= R; r += 0.1) {
        std::vector<double> e1(static_cast<std::size_t>(d), 0.0), diag(static_cast<std::size_t>(d), r / std::sqrt(d));
        e1[0] = r;
        grid.push_back(e1);
        grid.push_back(diag);
      }
    }
    k.layer = higher_layer_constant(d, N_top, grid).summary.at("sup");
  }
  cache[d] = k;
  return k;
}

LemmaSum lemma_sum(int d, double eps, std::span<const double> u, int N_max) {
  return lemma_sum(d, eps, u, N_max, default_tail_constants(d));
}

LemmaSum lemma_sum(int d, double eps, std::span<const double> u, int N_max, const TailConstants& k) {
  require(eps > 0, "lemma_sum needs eps > 0");
  validate_layer(d, N_max);
  require(static_cast<int>(u.size()) == d, "lemma_sum point must have length d");
  const double unorm = norm2(u);
  const double W = std::pow(std::max(1.0, unorm), eps);
  std::vector<double> v(u.size()), h, acc, next;
  LemmaSum out;
  double value = 0.0;
  double ratio = 0.0;
  for (int N = d; N <= N_max; N += 2) {
    const double s = 1.0 / std::sqrt(static_cast<double>(N));
    for (std::size_t j = 0; j < u.size(); ++j) v[j] = u[j] * s;
    const double H = layer_top(d, (N - d) / 2, v, h, acc, next);
    value += W * std::pow(N, -0.5 * d - eps) * H;
    double majorant_ratio;
    if (d == 1) {
      const double v2 = v[0] * v[0];
      majorant_ratio = H * std::sqrt(std::cbrt(N) + std::fabs(v2 - N)) / k.layer;
    } else {
      majorant_ratio = H * std::pow(N, 1.0 - 0.5 * d) / k.layer;
    }
    ratio = std::max(ratio, majorant_ratio);
  }
  const double C = k.layer * std::max(1.0, ratio);
  double tail = 0.0;
  const double M = N_max;
  if (d == 1) {
    // Terms below 2|u| use the pointwise majorant directly; beyond that
    // |v^2 - N| >= 3N/4 and the majorant is a pure power of N.
    int N = N_max + 2;
    for (; N < 2.0 * unorm; N += 2) {
      const double v2 = unorm * unorm / N;
      tail += W * std::pow(N, -0.5 - eps) * C / std::sqrt(std::cbrt(N) + std::fabs(v2 - N));
    }
    const double K = W * C * std::sqrt(4.0 / 3.0);
    if (N == N_max + 2)
      tail += K * std::pow(M, -eps) / (2.0 * eps);
    else
      tail += K * (std::pow(N, -1.0 - eps) + std::pow(N, -eps) / (2.0 * eps));
  } else {
    tail = W * C * std::pow(M, -eps) / (2.0 * eps);
  }
  out.value = value;
  out.tail_bound = tail;
  out.constant_check = ratio;
  return out;
}

}  // namespace grushin
