#include "grushin/experiments.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "grushin/error.hpp"
#include "grushin/estimates.hpp"
#include "grushin/geometry.hpp"
#include "grushin/hermite.hpp"
#include "json.hpp"

namespace grushin {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

double parse_real(const std::string& raw, const std::string& key) {
  std::string s = trim(raw);
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (s.empty() || s == "+") return scale;
    if (s == "-") return -scale;
  }
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw PreconditionError("config key '" + key + "': '" + raw + "' is not a number");
  return v * scale;
}

std::vector<double> parse_list(const std::string& raw, const std::string& key) {
  std::string s = raw;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  for (std::string tok; in >> tok;) out.push_back(parse_real(tok, key));
  if (out.empty()) throw PreconditionError("config key '" + key + "' is empty");
  return out;
}

std::vector<Point> parse_points(const std::string& raw, const std::string& key, const Dimensions& d) {
  std::vector<Point> out;
  std::istringstream in(raw);
  for (std::string item; std::getline(in, item, ';');) {
    if (trim(item).empty()) continue;
    const auto c = parse_list(item, key);
    if (static_cast<int>(c.size()) != d.d1 + d.d2) {
      std::ostringstream os;
      os << "config key '" << key << "': point '" << trim(item) << "' has " << c.size()
         << " coordinates, expected d1+d2=" << d.d1 + d.d2;
      throw PreconditionError(os.str());
    }
    out.push_back(Point{{c.begin(), c.begin() + d.d1}, {c.begin() + d.d1, c.end()}});
  }
  if (out.empty()) throw PreconditionError("config key '" + key + "' lists no points");
  return out;
}

bool parse_bool(const std::string& raw, const std::string& key) {
  const auto s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw PreconditionError("config key '" + key + "': '" + raw + "' is not a boolean");
}

int as_int(double v, const std::string& key) {
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw PreconditionError("config key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

ExperimentConfig from_tree(const pt::ptree& tree) {
  static const std::set<std::string> sections = {"experiment", "grid", "params", "samples", "multiplier"};
  for (const auto& [name, _] : tree)
    if (!sections.count(name)) throw PreconditionError("unknown config section [" + name + "]");
  ExperimentConfig cfg;
  const auto exp = tree.get_child_optional("experiment");
  if (!exp || !exp->get_optional<std::string>("name"))
    throw PreconditionError("config needs [experiment] name = <experiment>");
  for (const auto& [k, v] : *exp) {
    const auto val = v.get_value<std::string>();
    if (k == "name")
      cfg.experiment = trim(val);
    else if (k == "seed") {
      const auto s = trim(val);
      std::uint64_t seed = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
      if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw PreconditionError("config key 'seed' must be an unsigned 64-bit integer");
      cfg.seed = seed;
    } else if (k == "exploratory")
      cfg.exploratory = parse_bool(val, k);
    else
      throw PreconditionError("unknown key '" + k + "' in [experiment]");
  }
  if (!has_experiment(cfg.experiment))
    throw PreconditionError("unknown experiment '" + cfg.experiment + "' (see `grushin list`)");

  if (const auto g = tree.get_child_optional("grid")) {
    std::map<std::string, double> v;
    for (const auto& [k, node] : *g) {
      if (k == "match_R")
        cfg.match_R = parse_bool(node.get_value<std::string>(), k);
      else
        v[k] = parse_real(node.get_value<std::string>(), k);
    }
    static const std::set<std::string> keys = {"d1", "d2", "xp_halfwidth", "np_points", "xpp_period",
                                               "npp_points", "hermite_cutoff", "resolution_margin"};
    for (const auto& [k, _] : v)
      if (!keys.count(k)) throw PreconditionError("unknown key '" + k + "' in [grid]");
    if (v.count("d1")) cfg.dims.d1 = as_int(v["d1"], "d1");
    if (v.count("d2")) cfg.dims.d2 = as_int(v["d2"], "d2");
    cfg.dims.validate();
    if (v.count("xp_halfwidth")) {
      GridParams p;
      p.dims = cfg.dims;
      for (const char* k : {"xp_halfwidth", "np_points", "xpp_period", "npp_points", "hermite_cutoff"})
        if (!v.count(k)) throw PreconditionError(std::string("[grid] needs ") + k);
      p.xp_halfwidth = v["xp_halfwidth"];
      p.np_points = as_int(v["np_points"], "np_points");
      p.xpp_period = v["xpp_period"];
      p.npp_points = as_int(v["npp_points"], "npp_points");
      p.hermite_cutoff = as_int(v["hermite_cutoff"], "hermite_cutoff");
      if (v.count("resolution_margin")) p.resolution_margin = v["resolution_margin"];
      cfg.grid = p;
    }
  }
  if (const auto prm = tree.get_child_optional("params"))
    for (const auto& [k, node] : *prm) cfg.lists[k] = parse_list(node.get_value<std::string>(), k);
  if (const auto s = tree.get_child_optional("samples"))
    for (const auto& [k, node] : *s) cfg.points[k] = parse_points(node.get_value<std::string>(), k, cfg.dims);
  if (const auto m = tree.get_child_optional("multiplier"))
    for (const auto& [k, node] : *m) {
      const auto val = node.get_value<std::string>();
      if (k == "kind") {
        cfg.multiplier.kind = trim(val);
        static const std::set<std::string> kinds = {"bump", "indicator", "heat", "bochner_riesz", "constant"};
        if (!kinds.count(cfg.multiplier.kind))
          throw PreconditionError("unknown multiplier kind '" + cfg.multiplier.kind + "'");
      } else if (k == "lo")
        cfg.multiplier.lo = parse_real(val, k);
      else if (k == "hi")
        cfg.multiplier.hi = parse_real(val, k);
      else if (k == "t")
        cfg.multiplier.t = parse_real(val, k);
      else if (k == "kappa")
        cfg.multiplier.kappa = parse_real(val, k);
      else if (k == "value")
        cfg.multiplier.value = parse_real(val, k);
      else
        throw PreconditionError("unknown key '" + k + "' in [multiplier]");
    }
  return cfg;
}

Multiplier make_multiplier(const MultiplierSpec& m, double scale) {
  if (m.kind == "bump") return bump(m.lo * scale, m.hi * scale);
  if (m.kind == "indicator") return indicator(m.lo * scale, m.hi * scale);
  if (m.kind == "heat") return heat(m.t);
  if (m.kind == "bochner_riesz") return bochner_riesz(m.t, m.kappa);
  Multiplier c = constant(m.value);
  c.support_lo = m.lo * scale;
  c.support_hi = m.hi * scale;
  return c;
}

GridPtr need_grid(const ExperimentConfig& cfg) {
  if (!cfg.grid) throw PreconditionError("experiment '" + cfg.experiment + "' needs a full [grid] section");
  return make_grid(*cfg.grid);
}

std::string tag(const std::string& key, double v) { return key + "=" + format_number(v); }

/// Concatenates reports with identical columns; summaries are keyed by `label`.
EstimateReport merge(std::vector<EstimateReport> parts, const std::vector<std::string>& labels) {
  EstimateReport out = parts.front();
  out.params.clear();
  out.values.clear();
  out.summary.clear();
  out.fit.reset();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    for (std::size_t r = 0; r < p.rows(); ++r) out.add_row(p.params[r], p.values[r]);
    for (const auto& [k, v] : p.summary) out.summary[k + "@" + labels[i]] = v;
    if (p.fit) {
      out.summary["fit_exponent@" + labels[i]] = p.fit->exponent;
      out.summary["fit_residual@" + labels[i]] = p.fit->residual;
    }
    for (const auto& [k, v] : p.truncation) {
      auto it = out.truncation.find(k);
      if (it == out.truncation.end())
        out.truncation[k] = v;
      else if (k == "resolved_lambda_max" || k == "band_xi_max")
        it->second = std::min(it->second, v);
      else
        it->second = std::max(it->second, v);
    }
    out.exploratory = out.exploratory || p.exploratory;
  }
  return out;
}

void scale_summary(EstimateReport& rep, const std::vector<double>& R, const std::vector<double>& sup) {
  if (R.size() < 2) return;
  const auto [lo, hi] = std::minmax_element(sup.begin(), sup.end());
  rep.summary["variation"] = *hi / *lo;
  rep.fit = loglog_fit(R, sup);
  rep.summary["R_slope"] = rep.fit->exponent;
}

std::vector<double> u_line(const ExperimentConfig& cfg) {
  const double umax = cfg.scalar("u_max", 100.0), step = cfg.scalar("u_step", 0.25);
  require(step > 0 && umax >= 0, "u_max must be >= 0 and u_step > 0");
  std::vector<double> u;
  const auto n = static_cast<long>(std::floor(umax / step + 1e-9));
  for (long i = 0; i <= n; ++i) u.push_back(step * static_cast<double>(i));
  return u;
}

template <class Fn>
EstimateReport sweep_R(const ExperimentConfig& cfg, Fn&& one) {
  const auto Rs = cfg.list("R", std::vector<double>{1.0});
  const auto base = need_grid(cfg);
  const auto ys = cfg.samples("y");
  std::vector<EstimateReport> parts;
  std::vector<std::string> labels;
  std::vector<double> sup;
  for (double R : Rs) {
    require(R > 0, "R must be > 0");
    GridPtr g = cfg.match_R ? base->dilated(1.0 / R) : base;
    std::vector<Point> yr = ys;
    if (cfg.match_R)
      for (auto& y : yr) y = dilate(1.0 / R, y);
    parts.push_back(one(make_multiplier(cfg.multiplier, R * R), R, yr, g));
    labels.push_back(tag("R", R));
    sup.push_back(parts.back().summary.at("sup_ratio"));
  }
  auto rep = merge(std::move(parts), labels);
  scale_summary(rep, Rs, sup);
  return rep;
}

EstimateReport run_fractional(const ExperimentConfig& c) {
  const auto g = need_grid(c);
  FractionalOptions o;
  o.modes = static_cast<std::size_t>(as_int(c.scalar("modes", 3), "modes"));
  o.max_degree = as_int(c.scalar("max_degree", 8), "max_degree");
  o.max_lattice = as_int(c.scalar("max_lattice", 4), "max_lattice");
  const int trials = as_int(c.scalar("trials", 200), "trials");
  std::vector<EstimateReport> parts;
  std::vector<std::string> labels;
  for (double gamma : c.list("gamma")) {
    parts.push_back(fractional_ratio(gamma, trials, g, c.seed, o));
    labels.push_back(tag("gamma", gamma));
  }
  return merge(std::move(parts), labels);
}

EstimateReport run_rough(const ExperimentConfig& c) {
  const auto g = need_grid(c);
  const auto F = make_multiplier(c.multiplier, 1.0);
  std::vector<EstimateReport> parts;
  std::vector<std::string> labels;
  for (double gamma : c.list("gamma")) {
    parts.push_back(rough_weighted_check(F, gamma, c.samples("y"), g));
    labels.push_back(tag("gamma", gamma));
  }
  return merge(std::move(parts), labels);
}

EstimateReport run_plancherel(const ExperimentConfig& c) {
  const double gamma = c.scalar("gamma");
  return sweep_R(c, [&](const Multiplier& F, double R, const std::vector<Point>& ys, GridPtr g) {
    return weighted_plancherel_ratio(F, gamma, R, ys, g, c.exploratory);
  });
}

SobolevConfig sobolev_cfg(const ExperimentConfig& c) {
  SobolevConfig s;
  s.fourier_resolution = as_int(c.scalar("fourier_resolution", s.fourier_resolution), "fourier_resolution");
  s.padding = as_int(c.scalar("padding", s.padding), "padding");
  return s;
}

EstimateReport run_l2_full(const ExperimentConfig& c) {
  const double alpha = c.scalar("alpha"), beta = c.scalar("beta"), gamma = c.scalar("gamma");
  const auto sob = sobolev_cfg(c);
  return sweep_R(c, [&](const Multiplier& F, double R, const std::vector<Point>& ys, GridPtr g) {
    return weighted_l2_full_check(F, alpha, beta, gamma, R, ys, g, sob);
  });
}

EstimateReport run_offball(const ExperimentConfig& c) {
  const double R = c.scalar("R", 1.0), alpha = c.scalar("alpha"), beta = c.scalar("beta");
  require(R > 0, "R must be > 0");
  std::vector<double> r;
  for (double v : c.list("rR")) r.push_back(v / R);
  const auto ys = c.samples("y");
  std::vector<EstimateReport> parts;
  std::vector<std::string> labels;
  const auto g = need_grid(c);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    parts.push_back(offball_sweep(make_multiplier(c.multiplier, R * R), alpha, beta, r, R, ys[i], g, sobolev_cfg(c)));
    labels.push_back("y" + std::to_string(i));
  }
  return merge(std::move(parts), labels);
}

EstimateReport run_gaussian(const ExperimentConfig& c) {
  const auto g = need_grid(c);
  return gaussian_bound_check(c.list("t"), c.samples("x"), c.samples("y"), *g, c.scalar("slack", 2.0));
}

EstimateReport run_heat_diagonal(const ExperimentConfig& c) {
  const auto g = need_grid(c);
  const auto ts = c.list("t");
  const auto ys = c.samples("y");
  std::vector<EstimateReport> parts;
  std::vector<std::string> labels;
  std::vector<double> norms, last;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    parts.push_back(heat_diagonal_limit(ys[i], ts, *g));
    labels.push_back("y" + std::to_string(i));
    double n2 = 0.0;
    for (double v : ys[i].xp) n2 += v * v;
    norms.push_back(std::sqrt(n2));
    last.push_back(parts.back().values.back()[1]);
  }
  auto rep = merge(std::move(parts), labels);
  if (ys.size() >= 2) {
    rep.fit = loglog_fit(norms, last);
    rep.summary["yp_exponent"] = rep.fit->exponent;
  }
  return rep;
}

EstimateReport run_imaginary(const ExperimentConfig& c) {
  LocalNormConfig cfg;
  cfg.fourier_resolution = as_int(c.scalar("fourier_resolution", cfg.fourier_resolution), "fourier_resolution");
  cfg.padding = as_int(c.scalar("padding", cfg.padding), "padding");
  cfg.t_grid = dyadic_grid(as_int(c.scalar("scale_lo", -2), "scale_lo"), as_int(c.scalar("scale_hi", 2), "scale_hi"),
                           c.scalar("half_steps", 1.0) != 0.0);
  std::vector<EstimateReport> parts;
  std::vector<std::string> labels;
  for (double s : c.list("s")) {
    parts.push_back(imaginary_power_mw_growth(s, c.list("t"), cfg));
    labels.push_back(tag("s", s));
  }
  return merge(std::move(parts), labels);
}

EstimateReport run_bochner(const ExperimentConfig& c) {
  const auto g = need_grid(c);
  std::vector<EstimateReport> parts;
  std::vector<std::string> labels;
  for (double k : c.list("kappa")) {
    parts.push_back(bochner_riesz_sup(k, c.list("t"), c.samples("y"), g));
    labels.push_back(tag("kappa", k));
  }
  auto rep = merge(std::move(parts), labels);
  rep.exploratory = rep.exploratory || c.exploratory;
  return rep;
}

EstimateReport run_muckenhoupt(const ExperimentConfig& c) {
  return muckenhoupt_constant(as_int(c.scalar("N_max"), "N_max"), u_line(c), c.scalar("c", 0.1));
}

EstimateReport run_higher_layer(const ExperimentConfig& c) {
  const int d = as_int(c.scalar("d", 2), "d");
  require(d >= 1 && d <= 8, "d must lie in [1, 8]");
  std::vector<std::vector<double>> grid;
  for (double u : u_line(c)) {
    std::vector<double> e1(static_cast<std::size_t>(d), 0.0), diag(static_cast<std::size_t>(d), u / std::sqrt(d));
    e1[0] = u;
    grid.push_back(e1);
    if (u > 0) grid.push_back(diag);
  }
  return higher_layer_constant(d, as_int(c.scalar("N_max"), "N_max"), grid, c.scalar("c", 0.1));
}

EstimateReport run_lemma_sum(const ExperimentConfig& c) {
  const int d = as_int(c.scalar("d", 1), "d");
  const double eps = c.scalar("epsilon", 0.5);
  const int N = as_int(c.scalar("N_max"), "N_max");
  EstimateReport rep("lemma_sum", {"d", "epsilon", "N_max", "u"},
                     {"value", "tail_bound", "tail_fraction", "constant_check"});
  double sup = -1.0, arg = 0.0, worst = 0.0;
  const auto us = u_line(c);
  std::vector<LemmaSum> res(us.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < us.size(); ++i) {
    std::vector<double> u(static_cast<std::size_t>(d), 0.0);
    u[0] = us[i];
    res[i] = lemma_sum(d, eps, u, N);
  }
  for (std::size_t i = 0; i < us.size(); ++i) {
    const auto& r = res[i];
    const double frac = r.tail_bound / r.value;
    rep.add_row({double(d), eps, double(N), us[i]}, {r.value, r.tail_bound, frac, r.constant_check});
    if (r.value > sup) {
      sup = r.value;
      arg = us[i];
    }
    worst = std::max(worst, frac);
  }
  rep.summary["sup"] = sup;
  rep.summary["argmax_u"] = arg;
  rep.summary["max_tail_fraction"] = worst;
  return rep;
}

EstimateReport run_ball_mc(const ExperimentConfig& c) {
  const auto n = static_cast<std::int64_t>(c.scalar("mc_samples", 200000));
  EstimateReport rep("ball_volume_mc", [&] {
    std::vector<std::string> names;
    for (int j = 0; j < c.dims.d1; ++j) names.push_back("x_p" + std::to_string(j + 1));
    for (int j = 0; j < c.dims.d2; ++j) names.push_back("x_pp" + std::to_string(j + 1));
    names.push_back("r");
    return names;
  }(), {"estimate", "std_error", "formula", "ratio"});
  double lo = INFINITY, hi = 0.0;
  std::uint64_t stream = 0;
  for (const auto& x : c.samples("x"))
    for (double r : c.list("r")) {
      const auto mc = ball_volume_mc(x, r, n, c.seed + stream++);
      const double f = ball_volume_formula(x, r);
      std::vector<double> prm = x.xp;
      prm.insert(prm.end(), x.xpp.begin(), x.xpp.end());
      prm.push_back(r);
      rep.add_row(prm, {mc.estimate, mc.std_error, f, mc.estimate / f});
      lo = std::min(lo, mc.estimate / f);
      hi = std::max(hi, mc.estimate / f);
    }
  rep.summary["ratio_min"] = lo;
  rep.summary["ratio_max"] = hi;
  return rep;
}

EstimateReport run_distance_bound(const ExperimentConfig& c) {
  EstimateReport rep("distance_bound_constant", {"R", "extent"}, {"constant"});
  const int n = as_int(c.scalar("mc_samples", 100000), "mc_samples");
  const double extent = c.scalar("extent", 4.0);
  double worst = 0.0;
  for (double R : c.list("R", std::vector<double>{1.0})) {
    const double k = distance_bound_constant(c.dims, R, n, extent, c.seed);
    rep.add_row({R, extent}, {k});
    worst = std::max(worst, k);
  }
  rep.summary["max_constant"] = worst;
  return rep;
}

EstimateReport run_volume_bound(const ExperimentConfig& c) {
  const double gamma = c.scalar("gamma"), beta = c.scalar("beta");
  EstimateReport rep("volume_bound_integral", [&] {
    std::vector<std::string> n{"R", "gamma", "beta"};
    for (int j = 0; j < c.dims.d1; ++j) n.push_back("y_p" + std::to_string(j + 1));
    for (int j = 0; j < c.dims.d2; ++j) n.push_back("y_pp" + std::to_string(j + 1));
    return n;
  }(), {"integral", "ball_volume", "ratio", "truncation_error", "quadrature_error"});
  double lo = INFINITY, hi = 0.0;
  for (const auto& y : c.samples("y"))
    for (double R : c.list("R")) {
      const auto v = volume_bound_integral(R, y, gamma, beta);
      std::vector<double> prm{R, gamma, beta};
      prm.insert(prm.end(), y.xp.begin(), y.xp.end());
      prm.insert(prm.end(), y.xpp.begin(), y.xpp.end());
      rep.add_row(prm, {v.integral, v.ball_volume, v.ratio, v.truncation_error, v.quadrature_error});
      lo = std::min(lo, v.ratio);
      hi = std::max(hi, v.ratio);
    }
  rep.summary["ratio_min"] = lo;
  rep.summary["ratio_max"] = hi;
  return rep;
}

struct Registered {
  CatalogEntry entry;
  std::function<EstimateReport(const ExperimentConfig&)> run;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> r = {
      {{"fractional_ratio", "estimates", "max of || |P|^gamma f || / || L^{gamma/2} |T|^{-gamma} f || over random band-limited fields",
        "grid; params gamma [trials modes max_degree max_lattice]"},
       run_fractional},
      {{"rough_weighted_check", "estimates", "|| |P|^gamma K(.,y) ||^2 against the layer-sum majorant",
        "grid; params gamma; samples y; multiplier"},
       run_rough},
      {{"weighted_plancherel_ratio", "estimates",
        "|B(y,1/R)|^{1/2} || (1+w_R)^gamma K(.,y) || / ||F_(R^2)||_2, gamma in [0, d2/2[",
        "grid [match_R]; params R gamma; samples y; multiplier (support in units of R^2)"},
       run_plancherel},
      {{"weighted_l2_full_check", "estimates", "as weighted_plancherel_ratio with (1+R rho)^alpha and a W_2^beta denominator",
        "grid [match_R]; params R alpha beta gamma; samples y; multiplier"},
       run_l2_full},
      {{"offball_l1", "estimates", "L1 mass of K(.,y) outside the ball of radius r against (1+rR)^{-alpha} ||F_(R^2)||_{W_2^beta}",
        "grid; params R alpha beta rR; samples y; multiplier"},
       run_offball},
      {{"gaussian_bound_check", "estimates", "fitted C, b in |p_t(x,y)| <= C |B(y,sqrt t)|^{-1} exp(-b rho^2/t)",
        "grid; params t [slack]; samples x y"},
       run_gaussian},
      {{"heat_diagonal_limit", "estimates", "p_t(y,y) (4 pi t)^{(d1+d2)/2} extrapolated to t -> 0 against |y'|^{-d2}",
        "grid; params t; samples y"},
       run_heat_diagonal},
      {{"imaginary_power_mw_growth", "estimates", "growth in t of the local Sobolev norm of lambda^{it}",
        "params s t [scale_lo scale_hi half_steps fourier_resolution padding]"},
       run_imaginary},
      {{"bochner_riesz_sup", "estimates", "sup over y of the L1 norm of the kernel of (1-tL)_+^kappa, per t",
        "grid; params kappa t; samples y"},
       run_bochner},
      {{"muckenhoupt_constant", "hermite", "sup of h_n(u)^2 (N^{1/3} + |u^2-N|)^{1/2} and of the exp(c u^2) tail",
        "params N_max [u_max u_step c]"},
       run_muckenhoupt},
      {{"higher_layer_constant", "hermite", "sup of H_{d,N}(u) N^{1-d/2} and of the exp(c |u|^2) tail",
        "params d N_max [u_max u_step c]"},
       run_higher_layer},
      {{"lemma_sum", "hermite", "weighted layer-sum series in N with its tail bound, per u along e1",
        "params d N_max [epsilon u_max u_step]"},
       run_lemma_sum},
      {{"ball_volume_mc", "geometry", "Monte Carlo volume of surrogate balls against the closed form",
        "grid d1 d2; params r [mc_samples]; samples x"},
       run_ball_mc},
      {{"distance_bound_constant", "geometry", "sampled sup of w_R(x,y) / (1 + R rho(x,y))",
        "grid d1 d2; params [R mc_samples extent]"},
       run_distance_bound},
      {{"volume_bound_integral", "geometry", "integral of (1+w_R)^{-2gamma}(1+R rho)^{-2beta} against |B(y,1/R)|",
        "grid d1 d2; params R gamma beta; samples y"},
       run_volume_bound},
  };
  return r;
}

}  // namespace

double ExperimentConfig::scalar(const std::string& key, std::optional<double> fallback) const {
  const auto it = lists.find(key);
  if (it == lists.end()) {
    if (fallback) return *fallback;
    throw PreconditionError("experiment '" + experiment + "' needs [params] " + key);
  }
  if (it->second.size() != 1) throw PreconditionError("[params] " + key + " must be a single value");
  return it->second.front();
}

std::vector<double> ExperimentConfig::list(const std::string& key,
                                           std::optional<std::vector<double>> fallback) const {
  const auto it = lists.find(key);
  if (it != lists.end()) return it->second;
  if (fallback) return *fallback;
  throw PreconditionError("experiment '" + experiment + "' needs [params] " + key);
}

std::vector<Point> ExperimentConfig::samples(const std::string& key) const {
  const auto it = points.find(key);
  if (it == points.end()) throw PreconditionError("experiment '" + experiment + "' needs [samples] " + key);
  return it->second;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw PreconditionError(std::string("malformed config: ") + e.what());
  }
  return from_tree(tree);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = [] {
    std::vector<CatalogEntry> out;
    for (const auto& r : registry()) out.push_back(r.entry);
    return out;
  }();
  return c;
}

bool has_experiment(const std::string& name) {
  return std::any_of(registry().begin(), registry().end(), [&](const auto& r) { return r.entry.name == name; });
}

EstimateReport run_experiment(const ExperimentConfig& cfg) {
  for (const auto& r : registry())
    if (r.entry.name == cfg.experiment) return r.run(cfg);
  throw PreconditionError("unknown experiment '" + cfg.experiment + "'");
}

RunFiles write_outputs(const ExperimentConfig& cfg, const EstimateReport& rep, const std::filesystem::path& out,
                       bool gnuplot) {
  std::filesystem::create_directories(out);
  RunFiles files;
  files.csv = out / (cfg.experiment + ".csv");
  files.manifest = out / "manifest.jsonl";
  {
    std::ofstream f(files.csv, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + files.csv.string());
    rep.write_csv(f);
  }
  if (gnuplot) {
    files.gnuplot = out / (cfg.experiment + ".dat");
    std::ofstream f(*files.gnuplot, std::ios::binary);
    rep.write_gnuplot(f);
  }
  nlohmann::ordered_json m;
  m["experiment"] = cfg.experiment;
  m["report"] = rep.name;
  m["seed"] = cfg.seed;
  m["exploratory"] = rep.exploratory;
  m["dims"] = {{"d1", cfg.dims.d1}, {"d2", cfg.dims.d2}};
  if (cfg.grid) {
    const auto& g = *cfg.grid;
    m["grid"] = {{"xp_halfwidth", g.xp_halfwidth}, {"np_points", g.np_points},   {"xpp_period", g.xpp_period},
                 {"npp_points", g.npp_points},     {"hermite_cutoff", g.hermite_cutoff},
                 {"resolution_margin", g.resolution_margin}, {"match_R", cfg.match_R}};
  }
  m["params"] = cfg.lists;
  m["truncation"] = rep.truncation;
  m["summary"] = rep.summary;
  if (rep.fit) m["fit"] = {{"constant", rep.fit->constant}, {"exponent", rep.fit->exponent}, {"residual", rep.fit->residual}};
  m["rows"] = rep.rows();
  m["csv"] = files.csv.filename().string();
  std::ofstream f(files.manifest, std::ios::binary);
  f << m.dump() << "\n";
  return files;
}

}  // namespace grushin
