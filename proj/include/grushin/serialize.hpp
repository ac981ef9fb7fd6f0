#pragma once

#include <string>

#include "grushin/spectral.hpp"

namespace grushin {

/// Flat binary layout: 8-byte magic, grid header as little-endian f64
/// (d1, d2, A, n', P, n'', N_max, margin), an entry count, then interleaved
/// re/im f64 pairs. A text sidecar `<path>.meta` lists the same header as
/// key=value lines for humans.
void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);

/// Amplitudes in band order followed by the zero-mode block and the residual.
void save_coeffs(const SpectralCoeffs& c, const std::string& path);
SpectralCoeffs load_coeffs(const std::string& path);

}  // namespace grushin
