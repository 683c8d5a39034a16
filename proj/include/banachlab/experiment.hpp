#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "banachlab/approx.hpp"

namespace banachlab {

// Flat key = value configuration with [a, b, c] list syntax; unknown keys
// are rejected with a diagnostic naming the key.
struct ExperimentConfig {
  Route route = Route::Wigner;
  std::vector<int> d_list = {2, 3};
  std::vector<double> eta_list = {0.01, 0.05};
  std::vector<std::uint64_t> seeds = {0, 1};
  InstanceBudgets budgets;
  int sandwich_samples = 12;
  int jobs = 1;
  std::uint64_t master_seed = 0;
  double delta_floor = 1e-9;
  bool allow_large_d = false;  // d <= 8 unless overridden
  std::string out_path = "sweep.csv";

  void validate() const;  // throws ConfigError
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::string route;
  int d = 0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  double epsilon_cert = 0.0;
  double epsilon_lb = 0.0;
  double delta_lb = 0.0;
  double lhs_estimate = 0.0;
  double thm1_rhs = 0.0;
  double route_bound = 0.0;
  double sandwich_worst_margin = 0.0;
  bool pass_delta = true;
  bool pass_thm1 = true;
  bool pass_route_bound = true;
  bool pass_sandwich = true;
  bool pass = true;
  std::string error;
};

std::string csv_header();
std::string csv_line(const ResultRow& row);

// One row per (d, eta, seed); failures are recorded in the row and the
// sweep continues. The CSV is written atomically (temp file + rename) when
// out_path is nonempty. Deterministic for a fixed config, including the
// jobs count.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

// Full property suite plus the configured sweep; prints one line per check
// and returns a process exit status (0 ok, 1 failed checks).
int check_all(const ExperimentConfig& config, std::ostream& out);

}  // namespace banachlab
