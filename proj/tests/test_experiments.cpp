#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "grushin/error.hpp"
#include "grushin/experiments.hpp"
#include "json.hpp"

using namespace grushin;

namespace {

const char* kSmallGrid = R"(
[grid]
d1 = 1
d2 = 1
xp_halfwidth = 15.2
np_points = 128
xpp_period = 2pi
npp_points = 128
hermite_cutoff = 41
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("catalog") {
  const auto& c = catalog();
  CHECK(c.size() == 15);
  std::set<std::string> names;
  std::size_t estimates = 0;
  for (const auto& e : c) {
    names.insert(e.name);
    CHECK(has_experiment(e.name));
    CHECK_FALSE(e.description.empty());
    estimates += e.module == "estimates";
  }
  CHECK(names.size() == c.size());
  CHECK(estimates == 9);
  CHECK(names.count("weighted_plancherel_ratio"));
  CHECK_FALSE(has_experiment("nope"));
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(std::string("[experiment]\nname = rough_weighted_check\nseed = 18446744073709551615\n") +
                                kSmallGrid +
                                "[params]\ngamma = 0, 0.25 0.5\n[samples]\ny = 0,0; 1, 0.5\n[multiplier]\nkind = bump\n"
                                "lo = 1.5\nhi = 5.5\n");
  CHECK(cfg.experiment == "rough_weighted_check");
  CHECK(cfg.seed == 18446744073709551615ull);
  REQUIRE(cfg.grid.has_value());
  CHECK(cfg.grid->xpp_period == doctest::Approx(2 * std::acos(-1.0)));
  CHECK(cfg.list("gamma") == std::vector<double>{0, 0.25, 0.5});
  CHECK(cfg.samples("y").size() == 2);
  CHECK(cfg.samples("y")[1].xpp[0] == 0.5);
  CHECK(cfg.multiplier.lo == 1.5);
  CHECK_THROWS_AS(cfg.scalar("gamma"), PreconditionError);
  CHECK(cfg.scalar("missing", 3.0) == 3.0);

  auto bad = [](const std::string& text) { CHECK_THROWS_AS(parse_config(text), PreconditionError); };
  bad("[experiment]\nname = unknown_thing\n");
  bad("[params]\nt = 1\n");
  bad("[experiment]\nname = heat_diagonal_limit\n[params]\nt = 0.1 abc\n");
  bad("[experiment]\nname = heat_diagonal_limit\n[bogus]\nx = 1\n");
  bad("[experiment]\nname = heat_diagonal_limit\nseed = -4\n");
  bad("[experiment]\nname = heat_diagonal_limit\n[grid]\nd1 = 1\nd2 = 1\nxp_halfwidth = 3\n");
  bad("[experiment]\nname = heat_diagonal_limit\n[grid]\nd1 = 1\nd2 = 1\n[samples]\ny = 1,2,3\n");
  bad("[experiment]\nname = heat_diagonal_limit\n[multiplier]\nkind = spline\n");
  bad("this is not ini [");
}

TEST_CASE("experiment preconditions surface as PreconditionError") {
  const auto cfg = parse_config(std::string("[experiment]\nname = weighted_plancherel_ratio\n") + kSmallGrid +
                                "[params]\nR = 1\ngamma = 0.7\n[samples]\ny = 0,0\n");
  try {
    run_experiment(cfg);
    FAIL("accepted gamma = 0.7");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("γ ∈ [0, d2/2[") != std::string::npos);
  }
  const auto missing = parse_config("[experiment]\nname = heat_diagonal_limit\n[params]\nt = 0.1\n");
  CHECK_THROWS_AS(run_experiment(missing), PreconditionError);
}

TEST_CASE("outputs are deterministic and self-describing") {
  const auto dir = std::filesystem::temp_directory_path() / "grushin_experiments_test";
  std::filesystem::remove_all(dir);
  const auto cfg = parse_config(std::string("[experiment]\nname = fractional_ratio\nseed = 5\n") + kSmallGrid +
                                "[params]\ngamma = 0.5 1\ntrials = 20\n");
  const auto a = write_outputs(cfg, run_experiment(cfg), dir / "a", true);
  const auto b = write_outputs(cfg, run_experiment(cfg), dir / "b", false);
  CHECK(slurp(a.csv) == slurp(b.csv));
  CHECK(slurp(a.manifest) == slurp(b.manifest));
  REQUIRE(a.gnuplot.has_value());
  CHECK(std::filesystem::file_size(*a.gnuplot) > 0);
  CHECK_FALSE(b.gnuplot.has_value());

  std::istringstream csv(slurp(a.csv));
  std::string header, row;
  std::getline(csv, header);
  CHECK(header == "gamma,trial,ratio,numerator,denominator");
  std::size_t rows = 0;
  while (std::getline(csv, row)) {
    ++rows;
    CHECK(std::count(row.begin(), row.end(), ',') == 4);
  }
  CHECK(rows == 40);

  const auto m = nlohmann::json::parse(slurp(a.manifest));
  CHECK(m["seed"] == 5);
  CHECK(m["grid"]["hermite_cutoff"] == 41);
  CHECK(m["truncation"].contains("resolved_lambda_max"));
  CHECK(m["rows"] == 40);

  auto other = cfg;
  other.seed = 6;
  const auto c = write_outputs(other, run_experiment(other), dir / "c", false);
  CHECK(slurp(c.csv) != slurp(a.csv));
  std::filesystem::remove_all(dir);
}

TEST_CASE("hermite and geometry experiments run from configs") {
  const auto lem = run_experiment(parse_config(
      "[experiment]\nname = lemma_sum\n[params]\nd = 1\nN_max = 101\nu_max = 5\nu_step = 0.5\n"));
  CHECK(lem.rows() == 11);
  CHECK(lem.summary.count("max_tail_fraction"));
  const auto vol = run_experiment(parse_config(
      "[experiment]\nname = volume_bound_integral\n[grid]\nd1 = 1\nd2 = 1\n[params]\nR = 1\ngamma = 0.4\n"
      "beta = 2.5\n[samples]\ny = 0,0\n"));
  CHECK(vol.cell(0, "ratio") == doctest::Approx(0.2574).epsilon(1e-3));
  const auto mc = run_experiment(parse_config(
      "[experiment]\nname = ball_volume_mc\nseed = 1\n[grid]\nd1 = 1\nd2 = 1\n[params]\nr = 1\nmc_samples = 20000\n"
      "[samples]\nx = 0,0\n"));
  CHECK(mc.cell(0, "ratio") == doctest::Approx(1.5).epsilon(0.05));
}
