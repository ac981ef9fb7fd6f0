#pragma once

#include <cstdint>
#include <vector>

#include "grushin/multnorm.hpp"
#include "grushin/report.hpp"
#include "grushin/spectral.hpp"

namespace grushin {

/// Exponents shared by the experiments; each experiment reads only its own.
struct EstimateParams {
  double R = 1.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double s = 0.0;
  double kappa = 0.0;
  double t = 1.0;
};

/// Column marker for a ratio whose numerator and denominator both vanish.
inline constexpr double kZeroOverZero = -1.0;

struct FractionalOptions {
  std::size_t modes = 3;
  int max_degree = 8;
  int max_lattice = 4;
};

/// max over random band-limited f of ||P|^gamma f|| / ||L^{gamma/2} |T|^{-gamma} f||.
EstimateReport fractional_ratio(double gamma, int trials, GridPtr grid, std::uint64_t seed,
                                const FractionalOptions& opt = {});

/// ||P|^gamma K(.,y)||^2 against the layer-sum majorant over the resolved spectrum.
EstimateReport rough_weighted_check(const Multiplier& F, double gamma, const std::vector<Point>& y_samples,
                                    GridPtr grid);

/// ||F_(R^2)||_{L^2[1,4]} by composite Simpson on 10^4 intervals.
double dilated_l2_norm(const Multiplier& F, double R);

/// |B(y,1/R)|^{1/2} ||(1+w_R)^gamma K(.,y)|| / ||F_(R^2)||_2 per y. With
/// `exploratory` the gamma < d2/2 precondition is lifted and the report is
/// flagged.
EstimateReport weighted_plancherel_ratio(const Multiplier& F, double gamma, double R,
                                         const std::vector<Point>& y_samples, GridPtr grid,
                                         bool exploratory = false);

EstimateReport weighted_l2_full_check(const Multiplier& F, double alpha, double beta, double gamma, double R,
                                      const std::vector<Point>& y_samples, GridPtr grid,
                                      const SobolevConfig& sob = {});

struct OffBall {
  double integral = 0.0;  // int_{rho(x,y) > r} |K(x,y)| dx
  double ratio = 0.0;     // integral / ((1+rR)^{-alpha} ||F_(R^2)||_{W_2^beta})
  double sobolev = 0.0;
};

/// Largest r for which the surrogate ball around y fits inside the grid box.
double inscribed_radius(const TorusGrid& g, const Point& y);

OffBall offball_l1(const Multiplier& F, double alpha, double beta, double r, double R, const Point& y, GridPtr grid,
                   const SobolevConfig& sob = {});
EstimateReport offball_sweep(const Multiplier& F, double alpha, double beta, const std::vector<double>& r_list,
                             double R, const Point& y, GridPtr grid, const SobolevConfig& sob = {});

/// Per t, constants C and b with |p_t(x,y)| <= C |B(y,sqrt t)|^{-1} exp(-b rho^2/t)
/// on the sample set. C is `slack` times the largest diagonal value.
EstimateReport gaussian_bound_check(const std::vector<double>& t_grid, const std::vector<Point>& x_samples,
                                    const std::vector<Point>& y_samples, const TorusGrid& grid, double slack = 2.0);

/// Throws if the periodized heat kernel at y is not localized within the torus.
void require_heat_localized(double t, const Point& y, const TorusGrid& g);

/// p_t(y,y) (4 pi t)^{(d1+d2)/2} per t with a least-squares extrapolation in sqrt(t).
EstimateReport heat_diagonal_limit(const Point& y, const std::vector<double>& t_grid, const TorusGrid& grid);

EstimateReport imaginary_power_mw_growth(double s, const std::vector<double>& t_grid, const LocalNormConfig& cfg);

/// sup over y of ||K_{(1-tL)_+^kappa}(.,y)||_1 per t.
EstimateReport bochner_riesz_sup(double kappa, const std::vector<double>& t_grid, const std::vector<Point>& y_samples,
                                 GridPtr grid);

/// Weighted norms of a kernel column on the grid, shared by the kernel estimates.
struct KernelNorms {
  double l2 = 0.0;
  double weighted_l2 = 0.0;
  double l1 = 0.0;
};
KernelNorms kernel_norms(const Field& K, const Point& y, double R, double gamma, double alpha);

}  // namespace grushin
