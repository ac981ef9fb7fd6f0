#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace grushin {

/// Power-law fit value ~ constant * x^exponent from least squares in log-log
/// coordinates; residual is the RMS of the log residuals.
struct PowerFit {
  double constant = 0.0;
  double exponent = 0.0;
  double residual = 0.0;
};

PowerFit loglog_fit(std::span<const double> x, std::span<const double> y);

/// Tabular outcome of one experiment. Every row carries its full parameter
/// tuple followed by the measured values, so a CSV is self-describing.
struct EstimateReport {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<std::string> value_names;
  std::vector<std::vector<double>> params;
  std::vector<std::vector<double>> values;
  std::optional<PowerFit> fit;
  std::map<std::string, double> summary;
  std::map<std::string, double> truncation;
  bool exploratory = false;

  EstimateReport() = default;
  EstimateReport(std::string name, std::vector<std::string> param_names,
                 std::vector<std::string> value_names);

  void add_row(std::vector<double> param_values, std::vector<double> measured);
  std::size_t rows() const { return params.size(); }

  /// Column lookup across params and values; throws std::out_of_range.
  std::vector<double> column(const std::string& name) const;
  double cell(std::size_t row, const std::string& name) const;

  void write_csv(std::ostream& out) const;
  void write_gnuplot(std::ostream& out) const;

  /// First non-finite cell as "row=<i> column=<name>", if any.
  std::optional<std::string> find_non_finite() const;
};

/// Shortest decimal that reproduces the double exactly.
std::string format_number(double v);

}  // namespace grushin
