#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grushin/report.hpp"
#include "grushin/spectral.hpp"

namespace grushin {

/// Multiplier named in a config. For experiments that take a spectral scale R
/// the support [lo, hi] is read in units of R^2.
struct MultiplierSpec {
  std::string kind = "bump";  // bump | indicator | heat | bochner_riesz | constant
  double lo = 1.0;
  double hi = 4.0;
  double t = 1.0;
  double kappa = 1.0;
  double value = 1.0;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  bool exploratory = false;
  std::optional<GridParams> grid;
  bool match_R = false;  // per R, run on grid.dilated(1/R) with y -> delta_{1/R} y
  Dimensions dims;       // from [grid] or [geometry]
  std::map<std::string, std::vector<double>> lists;
  std::map<std::string, std::vector<Point>> points;
  MultiplierSpec multiplier;

  /// The single value of a list parameter, or `fallback` when absent.
  double scalar(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  std::vector<double> list(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) const;
  std::vector<Point> samples(const std::string& key) const;
};

/// Parses an INI config. Numbers accept a trailing "pi" (e.g. "8pi").
/// Throws PreconditionError on any malformed or missing entry.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

struct CatalogEntry {
  std::string name;
  std::string module;
  std::string description;
  std::string required;
};

const std::vector<CatalogEntry>& catalog();
bool has_experiment(const std::string& name);

EstimateReport run_experiment(const ExperimentConfig& cfg);

struct RunFiles {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> gnuplot;
};

/// Writes <out>/<experiment>.csv and <out>/manifest.jsonl (one line per run).
RunFiles write_outputs(const ExperimentConfig& cfg, const EstimateReport& rep, const std::filesystem::path& out,
                       bool gnuplot);

}  // namespace grushin
