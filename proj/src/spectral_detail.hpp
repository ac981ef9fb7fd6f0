#pragma once

#include <cstddef>
#include <vector>

#include "grushin/spectral.hpp"

namespace grushin::detail {

std::size_t ipow(std::size_t b, int e);
std::vector<int> digits(std::size_t linear, std::size_t base, int count);
int parity_sign(std::size_t linear, std::size_t base, int count);
void scaled_row(double xi_abs, double x, int L, double* out);
double zero_mode_lambda(const TorusGrid& g, std::size_t m);

}  // namespace grushin::detail
