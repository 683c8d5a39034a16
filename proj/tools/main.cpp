#include <CLI11.hpp>
#include <iostream>

#include "banachlab/experiment.hpp"

// Exit codes: 0 success, 1 assertion/check failure, 2 configuration error.
int main(int argc, char** argv) {
  CLI::App app{
      "banachlab - stability experiments for almost-symmetries on finite dimensional "
      "Banach spaces"};

  std::string config_path;
  std::string out_path;
  long long seed_override = -1;
  bool check = false;
  int jobs = 0;

  app.add_option("--config", config_path, "configuration file (flat key = value; lists as [a, b])");
  app.add_option("--out", out_path, "CSV output path (overrides the config)");
  app.add_option("--seed", seed_override, "master seed override");
  app.add_flag("--check", check, "run the full property suite and exit nonzero on failure");
  app.add_option("--jobs", jobs, "worker threads for the sweep");

  app.footer(
      "Config keys (all optional, defaults in parentheses):\n"
      "  route (wigner|global, wigner)   d ([2, 3])          eta ([0.01, 0.05])\n"
      "  seeds ([0, 1])                  out (sweep.csv)     jobs (1)\n"
      "  master_seed (0)                 delta_floor (1e-9)  allow_large_d (false)\n"
      "  sandwich_samples (12)           eps_pairs (120)     delta_families (100)\n"
      "  delta_family_size (4)           minimax_samples (0=auto)\n"
      "  minimax_rounds (3)              approx_samples (150) chain_samples (400)");

  CLI11_PARSE(app, argc, argv);

  try {
    banachlab::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = banachlab::load_config(config_path);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (seed_override >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed_override);
    if (jobs > 0) cfg.jobs = jobs;
    cfg.validate();

    if (check) return banachlab::check_all(cfg, std::cout);

    const auto rows = banachlab::run_sweep(cfg);
    int failed = 0;
    for (const auto& r : rows)
      if (!r.pass) ++failed;
    std::cout << rows.size() << " rows written to " << cfg.out_path << ", " << failed
              << " failing\n";
    return failed == 0 ? 0 : 1;
  } catch (const banachlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
