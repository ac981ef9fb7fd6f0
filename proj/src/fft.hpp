#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace grushin::detail {

/// In-place unnormalized DFT of `howmany` consecutive blocks, each a
/// row-major array of the given shape. sign = -1 forward, +1 backward.
void dft_batch(std::complex<double>* data, const std::vector<int>& shape, std::size_t howmany, int sign);

}  // namespace grushin::detail
