#pragma once

#include <string>
#include <vector>

#include "grushin/estimates.hpp"

namespace grushin::detail {

std::vector<std::string> with_point_names(std::vector<std::string> names, const Dimensions& d,
                                          const std::string& prefix = "y");
std::vector<double> with_point(std::vector<double> row, const Point& y);
void record_grid(EstimateReport& rep, const TorusGrid& g, ZeroModePolicy policy);
double wrap(double d, double period);
/// Surrogate distance with x'' differences taken as minimal torus images.
double torus_distance(const Point& x, const Point& y, double period);
void require_gamma_range(double gamma, const Dimensions& d);
void require_dyadic_support(const Multiplier& F, double R);

}  // namespace grushin::detail
