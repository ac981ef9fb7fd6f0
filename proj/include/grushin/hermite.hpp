#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grushin/report.hpp"

namespace grushin {

/// L2-normalized Hermite function h_l(t).
double hermite_eval(int l, double t);

/// h_0(t), ..., h_L(t) from one pass of the recurrence.
std::vector<double> hermite_all(int L, double t);

/// Same as hermite_all but every value is multiplied by exp(log_gain). The
/// gain is folded into the running exponent, so h_l(t)*exp(c t^2) stays finite
/// where the two factors separately would under- and overflow.
std::vector<double> hermite_all_gain(int L, double t, double log_gain);
/// Allocation-free form of hermite_all_gain writing L+1 values to out.
void hermite_fill(int L, double t, double log_gain, double* out);

/// Tabulated h_l on a point set with quadrature weights.
struct HermiteTable {
  int max_degree = 0;
  std::vector<double> points;
  std::vector<double> quad_weights;
  std::vector<double> values;  // row-major (max_degree+1) x points.size()

  /// Uniform grid on [-T, T] with trapezoid weights.
  static HermiteTable uniform(int max_degree, double T, std::size_t n_points);
  /// Uniform grid wide enough for every degree up to max_degree.
  static HermiteTable for_degree(int max_degree, std::size_t points_per_unit = 16);

  double at(int l, std::size_t i) const { return values[static_cast<std::size_t>(l) * points.size() + i]; }

  /// Largest degree whose classically allowed region fits in the point range.
  int resolved_degree() const;
  /// max |sum_i w_i h_m h_n - delta_mn| over m, n <= up_to.
  double gram_error(int up_to) const;
  /// max over l, i of the relative recurrence residual.
  double recurrence_residual() const;
  double max_abs() const;
};

/// |xi|^{d1/4} prod_j h_{n_j}(|xi|^{1/2} u_j), xi != 0.
double scaled_hermite(std::span<const int> n, std::span<const double> u, std::span<const double> xi);
double scaled_hermite(std::span<const int> n, std::span<const double> u, double xi_abs);

struct LayerSumQuery {
  int d = 1;
  int N = 1;
  std::vector<double> u;
};

void validate_layer(int d, int N);

/// H_{d,N}(u): sum of prod_j h_{n_j}(u_j)^2 over 2|n| + d = N.
double layer_sum(const LayerSumQuery& q);
double layer_sum(int d, int N, std::span<const double> u);

/// H_{d,N}(u) for every N = d, d+2, ..., N_max at once; entry k is N = d + 2k.
std::vector<double> layer_sums_upto(int d, int N_max, std::span<const double> u);

std::int64_t multiplicity(int d, int N);

/// sup of h_n(u)^2 (N^{1/3} + |u^2 - N|)^{1/2} over odd N <= N_max and the grid,
/// and sup of h_n(u)^2 exp(c u^2) over grid points with u^2 >= 2N.
EstimateReport muckenhoupt_constant(int N_max, std::span<const double> u_grid, double c = 0.1);

/// sup of H_{d,N}(u) N^{1-d/2} over N <= N_max, and sup of H_{d,N}(u) exp(c |u|_inf^2)
/// over |u|_inf^2 >= 2N.
EstimateReport higher_layer_constant(int d, int N_max, const std::vector<std::vector<double>>& u_grid,
                                     double c = 0.1);

/// Constants feeding the tail majorant of lemma_sum. For d = 1, `layer` bounds
/// h_n(v)^2 (N^{1/3} + |v^2 - N|)^{1/2}; for d >= 2 it bounds H_{d,N}(v) N^{1-d/2}.
struct TailConstants {
  double layer = 0.0;
};

/// Empirical constant from a dense sweep; cached per d.
TailConstants default_tail_constants(int d);

struct LemmaSum {
  double value = 0.0;
  double tail_bound = 0.0;
  /// Largest observed term / majorant ratio inside the partial sum; > 1 means
  /// the constant was too small and has been raised to this factor.
  double constant_check = 0.0;
};

/// Partial sum over N in N_d, N <= N_max, of max{1,|u|}^eps N^{-d/2-eps} H_{d,N}(u/sqrt N),
/// plus a bound on the remaining tail.
LemmaSum lemma_sum(int d, double eps, std::span<const double> u, int N_max);
LemmaSum lemma_sum(int d, double eps, std::span<const double> u, int N_max, const TailConstants& k);

}  // namespace grushin
