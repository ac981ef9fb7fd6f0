#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "grushin/geometry.hpp"
#include "grushin/multiplier.hpp"

namespace grushin {

struct GridParams {
  Dimensions dims;
  double xp_halfwidth = 0.0;   // x' in [-A, A)^{d1}
  int np_points = 0;           // samples per x' axis
  double xpp_period = 0.0;     // x'' on the torus [0, P)^{d2}
  int npp_points = 0;          // samples per x'' axis
  int hermite_cutoff = 0;      // N_max
  double resolution_margin = 4.5;
};

/// One nonzero x''-frequency together with the Hermite layers it retains.
struct Slot {
  std::vector<int> k;        // lattice index, xi = (2 pi / P) k
  std::vector<double> xi;
  double xi_abs = 0.0;
  int layer_max = 0;         // largest retained N = 2|n| + d1
  int degree_max = 0;        // (layer_max - d1) / 2
  std::size_t offset = 0;    // first amplitude
  std::size_t count = 0;     // retained modes
  std::size_t fft_index = 0; // linear index in the x'' DFT array
};

enum class ZeroModePolicy { exclude, euclidean };

class TorusGrid {
 public:
  explicit TorusGrid(GridParams p);

  const GridParams& params() const { return p_; }
  const Dimensions& dims() const { return p_.dims; }
  double hp() const { return 2.0 * p_.xp_halfwidth / p_.np_points; }
  double hpp() const { return p_.xpp_period / p_.npp_points; }
  double xi_min() const;
  double xi_nyquist() const;
  std::size_t np_total() const { return np_total_; }
  std::size_t npp_total() const { return npp_total_; }
  std::size_t samples() const { return np_total_ * npp_total_; }
  double cell_volume() const;

  /// Retained nonzero frequencies, in increasing fft_index order.
  const std::vector<Slot>& band() const { return slots_; }
  std::size_t amplitude_count() const { return amplitude_count_; }
  /// Multi-indices ordered by layer; a slot with `count` modes uses the first
  /// `count` entries.
  const std::vector<std::vector<int>>& modes() const { return modes_; }
  /// Frequency slots omitted from the band (Nyquist rows, unresolved |xi|).
  std::size_t excluded_slots() const { return excluded_.size(); }

  /// Smallest eigenvalue of L that the discrete model cannot represent.
  double resolved_lambda_max(ZeroModePolicy policy) const;
  /// Largest xi_abs among retained slots.
  double band_xi_max() const;

  /// Grid mapped by delta_s: halfwidth s A, period s^2 P.
  std::shared_ptr<const TorusGrid> dilated(double s) const;

  double xp_coord(std::size_t axis_index) const { return -p_.xp_halfwidth + hp() * static_cast<double>(axis_index); }
  double xpp_coord(std::size_t axis_index) const { return hpp() * static_cast<double>(axis_index); }
  /// x'-frequency of the zero block entry in DFT order along one axis.
  double eta(std::size_t axis_index) const;

  Point point(std::size_t xp_linear, std::size_t xpp_linear) const;

 private:
  GridParams p_;
  std::size_t np_total_ = 0, npp_total_ = 0, amplitude_count_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::vector<int>> excluded_;
  std::vector<double> excluded_xi_abs_;
  std::vector<std::vector<int>> modes_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;
GridPtr make_grid(GridParams p);

/// Samples on the product grid; x' index (row-major over d1 axes) is the
/// outer index, x'' index the inner one.
struct Field {
  GridPtr grid;
  std::vector<cplx> samples;

  explicit Field(GridPtr g);
  Field(GridPtr g, std::vector<cplx> s);
  cplx& at(std::size_t xp_linear, std::size_t xpp_linear) { return samples[xp_linear * grid->npp_total() + xpp_linear]; }
  cplx at(std::size_t xp_linear, std::size_t xpp_linear) const { return samples[xp_linear * grid->npp_total() + xpp_linear]; }
  /// Discrete L2 norm squared with the cell volume.
  double norm2() const;
  double l1() const;
};

struct SpectralCoeffs {
  GridPtr grid;
  std::vector<cplx> amplitudes;  // per slot, grid->band()[s].offset + mode
  std::vector<cplx> zero_mode;   // xi = 0 block, x' DFT order
  double residual = 0.0;         // energy not represented by the band
  bool zero_mode_passthrough = false;

  explicit SpectralCoeffs(GridPtr g);
  double energy() const;
  bool zero_mode_empty() const;
};

Field zero_field(GridPtr g);
/// Samples of a callable f(Point) on the grid.
template <class Fn>
Field sample(GridPtr g, Fn&& f) {
  Field out(g);
  for (std::size_t i = 0; i < g->np_total(); ++i)
    for (std::size_t k = 0; k < g->npp_total(); ++k) out.at(i, k) = f(g->point(i, k));
  return out;
}

SpectralCoeffs analyze(const Field& f);
Field synthesize(const SpectralCoeffs& c);

std::vector<double> eigenvalue(std::span<const int> n, std::span<const double> xi);
double l_eigenvalue(std::span<const int> n, double xi_abs);

SpectralCoeffs apply_joint(const JointMultiplier& G, const SpectralCoeffs& c);
SpectralCoeffs apply_L(const Multiplier& F, const SpectralCoeffs& c, ZeroModePolicy policy);
SpectralCoeffs apply_T_power(double sigma, const SpectralCoeffs& c);
Field apply_P_power(double gamma, const Field& f);

/// Rejects F whose effective support reaches past the resolved spectrum.
void require_resolved(const Multiplier& F, const TorusGrid& g, ZeroModePolicy policy);

/// Coefficients of the periodized kernel column K_{F(L)}(., y).
SpectralCoeffs kernel_coefficients(const Multiplier& F, const Point& y, GridPtr g, ZeroModePolicy policy);
Field kernel_column(const Multiplier& F, const Point& y, GridPtr g, ZeroModePolicy policy = ZeroModePolicy::exclude);
/// K_{F(L)}(x, y) summed directly in coefficient space; no field is formed.
cplx kernel_value(const Multiplier& F, const Point& x, const Point& y, const TorusGrid& g,
                  ZeroModePolicy policy = ZeroModePolicy::exclude);
/// Coefficient-space value of ||K_{F(L)}(., y)||_2^2.
double kernel_plancherel_sum(const Multiplier& F, const Point& y, const TorusGrid& g,
                             ZeroModePolicy policy = ZeroModePolicy::exclude);

struct RandomFieldOptions {
  std::size_t modes = 0;        // 0: every retained amplitude is random; otherwise this many
  int max_degree = -1;          // restrict |n| (-1: no restriction)
  int max_lattice = -1;         // restrict |k|_inf (-1: no restriction)
  bool zero_mode = false;
};
SpectralCoeffs random_band_limited(GridPtr g, std::uint64_t seed, const RandomFieldOptions& opt = {});

namespace reference {
/// Direct evaluation without FFTs or OpenMP, for testing.
SpectralCoeffs analyze(const Field& f);
Field synthesize(const SpectralCoeffs& c);
}  // namespace reference

}  // namespace grushin
