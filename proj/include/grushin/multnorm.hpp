#pragma once

#include <vector>

#include "grushin/multiplier.hpp"

namespace grushin {

/// The fixed window exp(1 - 1/(1 - x^2)), x = log2(lambda), supported in [1/2, 2].
double bump_eta(double lambda);
Multiplier eta_multiplier();

struct SobolevConfig {
  int fourier_resolution = 512;  // samples per unit length
  int padding = 8;
};

/// W_2^s norm, (1/2pi) int (1+tau^2)^s |G^(tau)|^2 dtau under the square root,
/// from the DFT of zero-padded samples over G's declared support.
double sobolev_norm(const Multiplier& G, double s, const SobolevConfig& cfg = {});

struct LocalNormConfig {
  double s = 1.0;
  std::vector<double> t_grid;
  int fourier_resolution = 512;
  int padding = 8;
};

/// Dyadic grid 2^k, k_lo <= k <= k_hi, optionally with half steps.
std::vector<double> dyadic_grid(int k_lo, int k_hi, bool half_steps = false);

/// max over t in the grid of ||eta F_(t)||_{W_2^s}.
double local_sobolev_norm(const Multiplier& F, const LocalNormConfig& cfg);

struct DyadicPiece {
  int j = 0;
  Multiplier piece;
};

/// chi_j(lambda) = b(log2 lambda - j), b(u) = theta(u) - theta(u+1) with theta a
/// smooth step from 1 (u <= 0) to 0 (u >= 1). Sum over j of chi_j is 1 on (0, inf).
double dyadic_chi(int j, double lambda);

/// Pieces chi_j F for j_min <= j <= j_max whose support meets the declared support of F.
std::vector<DyadicPiece> dyadic_pieces(const Multiplier& F, int j_min, int j_max);
std::vector<DyadicPiece> dyadic_pieces(const Multiplier& F);

}  // namespace grushin
