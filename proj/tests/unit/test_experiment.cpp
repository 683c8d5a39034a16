#include <doctest.h>

#include <stdexcept>

#include <fstream>
#include <sstream>

#include "banachlab/experiment.hpp"

using namespace banachlab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.d_list = {2};
  cfg.eta_list = {0.0};
  cfg.seeds = {0};
  cfg.sandwich_samples = 3;
  cfg.budgets.eps_pairs = 40;
  cfg.budgets.delta_families = 30;
  cfg.budgets.approx_samples = 40;
  cfg.budgets.chain_samples = 80;
  cfg.out_path = "";
  return cfg;
}

}  // namespace

TEST_CASE("config parsing applies defaults and reads lists") {
  const auto cfg = parse_config_text("");
  CHECK(cfg.route == Route::Wigner);
  CHECK(cfg.d_list == std::vector<int>{2, 3});
  CHECK(cfg.jobs == 1);

  const auto full = parse_config_text(
      "# comment\n"
      "route = global\n"
      "d = [2, 4]\n"
      "eta = [0.0, 0.1]\n"
      "seeds = [5]\n"
      "jobs = 3\n"
      "out = results.csv\n"
      "master_seed = 17\n"
      "sandwich_samples = 4\n"
      "eps_pairs = 10\n");
  CHECK(full.route == Route::Global);
  CHECK(full.d_list == std::vector<int>{2, 4});
  CHECK(full.eta_list == std::vector<double>{0.0, 0.1});
  CHECK(full.seeds == std::vector<std::uint64_t>{5});
  CHECK(full.jobs == 3);
  CHECK(full.out_path == "results.csv");
  CHECK(full.master_seed == 17);
  CHECK(full.budgets.eps_pairs == 10);
}

TEST_CASE("config errors name the offending field") {
  CHECK_THROWS_WITH_AS((void)parse_config_text("routes = wigner\n"),
                       doctest::Contains("unknown configuration key 'routes'"), ConfigError);
  CHECK_THROWS_WITH_AS((void)parse_config_text("route = sideways\n"),
                       doctest::Contains("route"), ConfigError);
  CHECK_THROWS_WITH_AS((void)parse_config_text("d = [12]\n"), doctest::Contains("allow_large_d"),
                       ConfigError);
  CHECK_THROWS_WITH_AS((void)parse_config_text("eta = [0.9]\n"), doctest::Contains("eta"),
                       ConfigError);
  CHECK_THROWS_WITH_AS((void)parse_config_text("jobs = oops\n"), doctest::Contains("jobs"),
                       ConfigError);
  // Override flag admits larger dimensions.
  const auto big = parse_config_text("d = [9]\nallow_large_d = true\n");
  CHECK(big.d_list == std::vector<int>{9});
}

TEST_CASE("csv schema is stable") {
  CHECK(csv_header() ==
        "route,d,eta,seed,epsilon_cert,epsilon_lb,delta_lb,lhs_estimate,thm1_rhs,route_bound,"
        "sandwich_worst_margin,pass_delta,pass_thm1,pass_route_bound,pass_sandwich,pass,error");
  ResultRow row;
  row.route = "wigner";
  row.d = 2;
  row.eta = 0.05;
  row.seed = 3;
  row.epsilon_cert = 1.0 / 3.0;
  const std::string line = csv_line(row);
  // 17 columns and 17-significant-digit floats.
  int commas = 0;
  for (char c : line)
    if (c == ',') ++commas;
  CHECK(commas == 16);
  CHECK(line.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("tiny exact sweep has all pass flags set") {
  const auto rows = run_sweep(tiny_config());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].route == "wigner");
  CHECK(rows[0].epsilon_cert == 0.0);
  CHECK(rows[0].pass);
  CHECK(rows[0].pass_delta);
  CHECK(rows[0].pass_thm1);
  CHECK(rows[0].pass_route_bound);
  CHECK(rows[0].pass_sandwich);
  CHECK(rows[0].error.empty());
}

TEST_CASE("sweep cardinality matches the grid") {
  auto cfg = tiny_config();
  cfg.route = Route::Global;
  cfg.d_list = {2, 3};
  cfg.eta_list = {0.05};
  cfg.seeds = {0, 1};
  cfg.sandwich_samples = 0;
  const auto rows = run_sweep(cfg);
  CHECK(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.route == "global");
}

TEST_CASE("reruns are byte-identical and job-count independent") {
  auto cfg = tiny_config();
  cfg.eta_list = {0.05};
  cfg.seeds = {0, 1};
  cfg.out_path = "determinism_a.csv";
  (void)run_sweep(cfg);
  const std::string first = slurp("determinism_a.csv");
  (void)run_sweep(cfg);
  const std::string second = slurp("determinism_a.csv");
  CHECK(first == second);
  cfg.jobs = 4;
  cfg.out_path = "determinism_b.csv";
  (void)run_sweep(cfg);
  CHECK(slurp("determinism_b.csv") == first);
  CHECK(first.find(csv_header()) == 0);
}

TEST_CASE("removing the delta floor trips the quasi-norm guard") {
  auto cfg = tiny_config();
  cfg.delta_floor = 0.0;  // injected bug: exact symmetries now pass delta = 0
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].pass);
  CHECK(rows[0].error.find("quasi-norm") != std::string::npos);
  std::ostringstream report;
  const int status = check_all(cfg, report);
  CHECK(status == 1);
  CHECK(report.str().find("FAIL") != std::string::npos);
}

TEST_CASE("check_all passes on a small healthy configuration") {
  auto cfg = tiny_config();
  cfg.eta_list = {0.05};
  cfg.out_path = "check_all_unit.csv";
  std::ostringstream report;
  const int status = check_all(cfg, report);
  CHECK(status == 0);
  CHECK(report.str().find("ALL CHECKS PASSED") != std::string::npos);
}
