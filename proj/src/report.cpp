#include "grushin/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "grushin/error.hpp"

namespace grushin {

PowerFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "loglog_fit needs >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, "loglog_fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  require(denom > 0, "loglog_fit needs distinct abscissae");
  PowerFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.constant = std::exp(intercept);
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - intercept - fit.exponent * std::log(x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

EstimateReport::EstimateReport(std::string name_, std::vector<std::string> param_names_,
                               std::vector<std::string> value_names_)
    : name(std::move(name_)),
      param_names(std::move(param_names_)),
      value_names(std::move(value_names_)) {}

void EstimateReport::add_row(std::vector<double> param_values, std::vector<double> measured) {
  if (param_values.size() != param_names.size() || measured.size() != value_names.size())
    throw std::logic_error("report row width mismatch in " + name);
  params.push_back(std::move(param_values));
  values.push_back(std::move(measured));
}

std::vector<double> EstimateReport::column(const std::string& col) const {
  std::vector<double> out;
  out.reserve(rows());
  for (std::size_t r = 0; r < rows(); ++r) out.push_back(cell(r, col));
  return out;
}

double EstimateReport::cell(std::size_t row, const std::string& col) const {
  for (std::size_t j = 0; j < param_names.size(); ++j)
    if (param_names[j] == col) return params.at(row).at(j);
  for (std::size_t j = 0; j < value_names.size(); ++j)
    if (value_names[j] == col) return values.at(row).at(j);
  throw std::out_of_range("no column '" + col + "' in report " + name);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void EstimateReport::write_csv(std::ostream& out) const {
  bool first = true;
  for (const auto* names : {&param_names, &value_names})
    for (const auto& n : *names) {
      out << (first ? "" : ",") << n;
      first = false;
    }
  out << '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    first = true;
    for (const auto* row : {&params[r], &values[r]})
      for (double v : *row) {
        out << (first ? "" : ",") << format_number(v);
        first = false;
      }
    out << '\n';
  }
}

void EstimateReport::write_gnuplot(std::ostream& out) const {
  out << "#";
  for (const auto* names : {&param_names, &value_names})
    for (const auto& n : *names) out << ' ' << n;
  out << '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    bool first = true;
    for (const auto* row : {&params[r], &values[r]})
      for (double v : *row) {
        out << (first ? "" : " ") << format_number(v);
        first = false;
      }
    out << '\n';
  }
}

std::optional<std::string> EstimateReport::find_non_finite() const {
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t j = 0; j < params[r].size(); ++j)
      if (!std::isfinite(params[r][j]))
        return "row=" + std::to_string(r) + " column=" + param_names[j];
    for (std::size_t j = 0; j < values[r].size(); ++j)
      if (!std::isfinite(values[r][j]))
        return "row=" + std::to_string(r) + " column=" + value_names[j];
  }
  return std::nullopt;
}

}  // namespace grushin
