#include <algorithm>
#include <cmath>

#include "estimates_detail.hpp"
#include "grushin/error.hpp"

namespace grushin {

using namespace detail;

EstimateReport imaginary_power_mw_growth(double s, const std::vector<double>& t_grid, const LocalNormConfig& cfg) {
  require(s >= 0, "smoothness s must be >= 0");
  require(!t_grid.empty(), "imaginary power sweep needs a t grid");
  for (double t : t_grid) require(t == 0.0 || t >= 1.0, "imaginary power exponents must be 0 or >= 1");
  LocalNormConfig c = cfg;
  c.s = s;
  if (c.t_grid.empty()) c.t_grid = dyadic_grid(-2, 2, true);
  EstimateReport rep("imaginary_power_mw", {"s", "t"}, {"mw_norm"});
  std::vector<double> ts, ns;
  for (double t : t_grid) {
    const double n = local_sobolev_norm(imaginary_power(t), c);
    rep.add_row({s, t}, {n});
    if (t >= 1.0) {
      ts.push_back(t);
      ns.push_back(n);
    }
  }
  if (ts.size() >= 2) {
    rep.fit = loglog_fit(ts, ns);
    rep.summary["growth_exponent"] = rep.fit->exponent;
  }
  return rep;
}

EstimateReport bochner_riesz_sup(double kappa, const std::vector<double>& t_grid, const std::vector<Point>& y_samples,
                                 GridPtr grid) {
  require(kappa >= 0, "Bochner-Riesz order kappa must be >= 0");
  require(!t_grid.empty() && !y_samples.empty(), "bochner_riesz_sup needs times and samples");
  EstimateReport rep("bochner_riesz_sup", {"kappa", "t"}, {"sup_l1", "argmax_sample"});
  rep.exploratory = kappa == 0.0;
  double lo = INFINITY, hi = 0.0;
  for (double t : t_grid) {
    const Multiplier B = bochner_riesz(t, kappa);
    require_resolved(B, *grid, ZeroModePolicy::euclidean);
    double sup = 0.0;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < y_samples.size(); ++j) {
      const Field K = kernel_column(B, y_samples[j], grid, ZeroModePolicy::euclidean);
      const double l1 = K.l1();
      if (l1 > sup) {
        sup = l1;
        arg = j;
      }
    }
    rep.add_row({kappa, t}, {sup, static_cast<double>(arg)});
    lo = std::min(lo, sup);
    hi = std::max(hi, sup);
  }
  rep.summary["variation"] = lo > 0 ? hi / lo : INFINITY;
  record_grid(rep, *grid, ZeroModePolicy::euclidean);
  return rep;
}

}  // namespace grushin
