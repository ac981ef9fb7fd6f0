#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "grushin/error.hpp"
#include "grushin/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericFailure = 3;

int run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out, bool gnuplot) {
  using namespace grushin;
  ExperimentConfig cfg;
  EstimateReport rep;
  try {
    cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    rep = run_experiment(cfg);
  } catch (const PreconditionError& e) {
    std::cerr << "grushin: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericError& e) {
    std::cerr << "grushin: numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
  if (const auto bad = rep.find_non_finite()) {
    std::cerr << "grushin: numeric failure: non-finite value at " << *bad << "\n";
    return kNumericFailure;
  }
  try {
    const auto files = write_outputs(cfg, rep, out, gnuplot);
    std::cout << cfg.experiment << ": " << rep.rows() << " rows -> " << files.csv.string() << "\n";
    for (const auto& [k, v] : rep.summary) std::cout << "  " << k << " = " << format_number(v) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "grushin: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}

int list() {
  for (const auto& e : grushin::catalog())
    std::cout << e.name << " [" << e.module << "]\n  " << e.description << "\n  needs: " << e.required << "\n";
  std::cout << grushin::catalog().size() << " experiments\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grushin spectral multiplier experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  std::string config, out = "out";
  std::optional<std::uint64_t> seed;
  bool gnuplot = false;
  run_cmd->add_option("config", config, "INI config file")->required();
  run_cmd->add_option("--seed", seed, "override the config seed");
  run_cmd->add_option("--out", out, "output directory");
  run_cmd->add_flag("--gnuplot", gnuplot, "also write a gnuplot .dat file");

  app.add_subcommand("list", "list available experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (run_cmd->parsed()) return run(config, seed, out, gnuplot);
  return list();
}
