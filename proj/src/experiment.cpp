#include "banachlab/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "banachlab/tolerances.hpp"
#include "banachlab/type_cotype.hpp"

namespace banachlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value, const std::string& key) {
  std::string body = trim(value);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw ConfigError("unterminated list for key '" + key + "'");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::string> items;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value '" + v + "' for key '" + key + "'");
  }
}

long long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value '" + v + "' for key '" + key + "'");
  }
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d_list.empty()) throw ConfigError("field 'd' must list at least one dimension");
  for (int d : d_list) {
    if (d < 2) throw ConfigError("field 'd' entries must be >= 2");
    if (d > 8 && !allow_large_d)
      throw ConfigError("field 'd' entries above 8 need allow_large_d = true");
  }
  if (eta_list.empty()) throw ConfigError("field 'eta' must list at least one value");
  for (double e : eta_list)
    if (e < 0.0 || e > 0.5) throw ConfigError("field 'eta' entries must lie in [0, 1/2]");
  if (seeds.empty()) throw ConfigError("field 'seeds' must list at least one seed");
  if (jobs < 1) throw ConfigError("field 'jobs' must be positive");
  if (sandwich_samples < 0) throw ConfigError("field 'sandwich_samples' must be >= 0");
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw ConfigError(std::string("budget field '") + name + "' must be positive");
  };
  positive(budgets.eps_pairs, "eps_pairs");
  positive(budgets.delta_families, "delta_families");
  positive(budgets.delta_family_size - 1, "delta_family_size");  // needs >= 2
  positive(budgets.minimax_rounds, "minimax_rounds");
  positive(budgets.approx_samples, "approx_samples");
  positive(budgets.chain_samples, "chain_samples");
  if (budgets.minimax_samples < 0) throw ConfigError("field 'minimax_samples' must be >= 0");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "route") {
      if (value == "wigner")
        cfg.route = Route::Wigner;
      else if (value == "global")
        cfg.route = Route::Global;
      else
        throw ConfigError("field 'route' must be wigner or global, got '" + value + "'");
    } else if (key == "d") {
      cfg.d_list.clear();
      for (const auto& v : split_list(value, key))
        cfg.d_list.push_back(static_cast<int>(parse_int(v, key)));
    } else if (key == "eta") {
      cfg.eta_list.clear();
      for (const auto& v : split_list(value, key)) cfg.eta_list.push_back(parse_double(v, key));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& v : split_list(value, key))
        cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(v, key)));
    } else if (key == "out") {
      cfg.out_path = value;
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(parse_int(value, key));
    } else if (key == "master_seed") {
      cfg.master_seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "delta_floor") {
      cfg.delta_floor = parse_double(value, key);
    } else if (key == "allow_large_d") {
      cfg.allow_large_d = value == "true" || value == "1";
    } else if (key == "sandwich_samples") {
      cfg.sandwich_samples = static_cast<int>(parse_int(value, key));
    } else if (key == "eps_pairs") {
      cfg.budgets.eps_pairs = static_cast<int>(parse_int(value, key));
    } else if (key == "delta_families") {
      cfg.budgets.delta_families = static_cast<int>(parse_int(value, key));
    } else if (key == "delta_family_size") {
      cfg.budgets.delta_family_size = static_cast<int>(parse_int(value, key));
    } else if (key == "minimax_samples") {
      cfg.budgets.minimax_samples = static_cast<int>(parse_int(value, key));
    } else if (key == "minimax_rounds") {
      cfg.budgets.minimax_rounds = static_cast<int>(parse_int(value, key));
    } else if (key == "approx_samples") {
      cfg.budgets.approx_samples = static_cast<int>(parse_int(value, key));
    } else if (key == "chain_samples") {
      cfg.budgets.chain_samples = static_cast<int>(parse_int(value, key));
    } else {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string csv_header() {
  return "route,d,eta,seed,epsilon_cert,epsilon_lb,delta_lb,lhs_estimate,thm1_rhs,route_bound,"
         "sandwich_worst_margin,pass_delta,pass_thm1,pass_route_bound,pass_sandwich,pass,error";
}

std::string csv_line(const ResultRow& r) {
  std::ostringstream os;
  os << r.route << ',' << r.d << ',' << fmt17(r.eta) << ',' << r.seed << ','
     << fmt17(r.epsilon_cert) << ',' << fmt17(r.epsilon_lb) << ',' << fmt17(r.delta_lb) << ','
     << fmt17(r.lhs_estimate) << ',' << fmt17(r.thm1_rhs) << ',' << fmt17(r.route_bound) << ','
     << fmt17(r.sandwich_worst_margin) << ',' << (r.pass_delta ? 1 : 0) << ','
     << (r.pass_thm1 ? 1 : 0) << ',' << (r.pass_route_bound ? 1 : 0) << ','
     << (r.pass_sandwich ? 1 : 0) << ',' << (r.pass ? 1 : 0) << ',' << r.error;
  return os.str();
}

namespace {

struct Task {
  int d;
  double eta;
  std::uint64_t seed;
  std::uint64_t row_seed;
};

ResultRow run_one(const ExperimentConfig& cfg, const Task& task) {
  ResultRow row;
  row.route = cfg.route == Route::Wigner ? "wigner" : "global";
  row.d = task.d;
  row.eta = task.eta;
  row.seed = task.seed;
  try {
    const StabilityInstance inst =
        verify_instance(cfg.route, task.d, task.eta, task.row_seed, cfg.budgets, cfg.delta_floor);
    row.epsilon_cert = inst.epsilon_certificate;
    row.epsilon_lb = inst.epsilon_lower;
    row.delta_lb = inst.delta_lower;
    row.lhs_estimate = cfg.route == Route::Wigner ? inst.lhs_projective : inst.lhs_sphere;
    row.thm1_rhs = inst.thm1_rhs_value;
    row.route_bound = inst.route_bound;
    row.pass_delta = inst.pass_delta;
    row.pass_thm1 = inst.pass_thm1;
    row.pass_route_bound = inst.pass_route_bound;
    if (cfg.sandwich_samples > 0) {
      const auto rep = sandwich_check(*inst.twisted, cfg.sandwich_samples,
                                      hash_combine(task.row_seed, 0x53574348ULL));
      row.sandwich_worst_margin = std::max(
          {rep.worst_upper_vs_quasi, rep.worst_quasi_vs_twice, rep.worst_lower_vs_upper});
      row.pass_sandwich = rep.ok;
    }
    row.pass = row.pass_delta && row.pass_thm1 && row.pass_route_bound && row.pass_sandwich &&
               inst.pass_chain;
    if (!inst.failure.empty()) row.error = inst.failure;
  } catch (const std::exception& e) {
    row.pass = row.pass_delta = row.pass_thm1 = row.pass_route_bound = row.pass_sandwich = false;
    row.error = e.what();
  }
  // Commas would break the fixed CSV schema.
  for (auto& c : row.error)
    if (c == ',' || c == '\n') c = ';';
  return row;
}

void write_csv_atomic(const std::string& path, const std::vector<ResultRow>& rows) {
  if (path.empty()) return;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << csv_header() << '\n';
    for (const auto& r : rows) out << csv_line(r) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move '" + tmp + "' to '" + path + "'");
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  std::vector<Task> tasks;
  for (int d : config.d_list)
    for (std::size_t ei = 0; ei < config.eta_list.size(); ++ei)
      for (std::uint64_t s : config.seeds) {
        Task t{d, config.eta_list[ei], s, 0};
        // Mix the master seed with the grid coordinates so rows are
        // independent of list order and of each other.
        std::uint64_t mixed = hash_combine(config.master_seed, static_cast<std::uint64_t>(d));
        mixed = hash_combine(mixed, static_cast<std::uint64_t>(ei) + 101);
        mixed = hash_combine(mixed, s + 7919);
        t.row_seed = mixed;
        tasks.push_back(t);
      }
  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      rows[i] = run_one(config, tasks[i]);
    }
  };
  const int jobs = std::min<std::size_t>(config.jobs, tasks.size());
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  write_csv_atomic(config.out_path, rows);
  return rows;
}

namespace {

struct CheckRunner {
  std::ostream& out;
  int failures = 0;
  void run(const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) out << " - " << detail;
    out << '\n';
    if (!ok) ++failures;
  }
};

}  // namespace

int check_all(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  CheckRunner checks{out};
  const std::uint64_t ms = config.master_seed;

  // Norm axioms on a representative space set.
  {
    bool ok = true;
    std::string detail;
    const NormedSpace spaces[] = {NormedSpace::lp(3, 1.0), NormedSpace::lp(4, kInf),
                                  NormedSpace::schatten(3, 1.0), NormedSpace::schatten(2, kInf),
                                  NormedSpace::schatten(3, 2.0)};
    Rng rng = Rng(ms).child(0x4e4f524dULL);
    for (const auto& s : spaces) {
      for (int t = 0; t < 200 && ok; ++t) {
        const Eigen::VectorXd x = rng.gaussian_vector(s.dim());
        const Eigen::VectorXd y = rng.gaussian_vector(s.dim());
        const double lam = rng.uniform(-5.0, 5.0);
        if (std::abs(s.norm(lam * x) - std::abs(lam) * s.norm(x)) >
            tols().norm_identity * (1.0 + s.norm(x))) {
          ok = false;
          detail = "homogeneity failed on " + s.describe();
        }
        if (s.norm(x + y) > s.norm(x) + s.norm(y) + tols().norm_identity) {
          ok = false;
          detail = "triangle inequality failed on " + s.describe();
        }
        if (x.norm() > 1e-6 && s.norm(x) <= 0.0) {
          ok = false;
          detail = "definiteness failed on " + s.describe();
        }
        const double holder = std::abs(x.dot(y)) - s.norm(x) * s.dual_norm(y).value;
        if (holder > tols().norm_identity * (1.0 + std::abs(x.dot(y)))) {
          ok = false;
          detail = "Holder inequality failed on " + s.describe();
        }
      }
    }
    checks.run("norm-axioms", ok, detail);
  }

  // Spectral decomposition reconstructs and is a fixed point.
  {
    bool ok = true;
    std::string detail;
    Rng rng = Rng(ms).child(0x53504543ULL);
    for (int t = 0; t < 40 && ok; ++t) {
      const int d = 2 + (t % 4);
      Eigen::MatrixXcd a = rng.complex_gaussian_matrix(d, d);
      a = 0.5 * (a + a.adjoint().eval()).eval();
      const auto comps = spectral_decompose(a);
      Eigen::MatrixXcd rec = Eigen::MatrixXcd::Zero(d, d);
      for (const auto& c : comps) rec += c.eigenvalue * c.projection.matrix();
      if ((rec - a).norm() > tols().spectral_reconstruction * std::max(1.0, a.norm())) {
        ok = false;
        detail = "reconstruction residual too large at d=" + std::to_string(d);
      }
    }
    checks.run("spectral-decomposition", ok, detail);
  }

  // Haar sampling produces unitaries deterministically.
  {
    bool ok = true;
    for (int d = 1; d <= 6 && ok; ++d) {
      const Eigen::MatrixXcd u = haar_unitary(d, ms + d);
      const Eigen::MatrixXcd v = haar_unitary(d, ms + d);
      ok = is_unitary(u, tols().unitarity) && (u - v).norm() == 0.0;
    }
    checks.run("haar-unitary", ok, "");
  }

  // Type/cotype estimates stay below the closed-form caps.
  {
    bool ok = true;
    std::string detail;
    const OptimizationBudget quick{2, 120};
    const struct {
      NormedSpace space;
      SpaceClass cls;
    } grid[] = {
        {NormedSpace::lp(2, 1.0), SpaceClass::L1},       {NormedSpace::lp(3, 2.0), SpaceClass::Hilbert},
        {NormedSpace::lp(3, kInf), SpaceClass::Linf},    {NormedSpace::schatten(2, 1.0), SpaceClass::S1},
        {NormedSpace::schatten(2, 2.0), SpaceClass::Hilbert}, {NormedSpace::schatten(2, kInf), SpaceClass::Sinf},
    };
    int idx = 0;
    for (const auto& g : grid) {
      const int d = g.space.kind() == SpaceKind::Schatten ? g.space.matrix_dim() : g.space.dim();
      const auto t = estimate_type2(g.space, 4, quick, hash_combine(ms, 900 + idx));
      const auto c = estimate_cotype2(g.space, 4, quick, hash_combine(ms, 950 + idx));
      const double cap_t = consistency_cap(g.cls, d, ConstantKind::Type, 2.0);
      const double cap_c = consistency_cap(g.cls, d, ConstantKind::Cotype, 2.0);
      const double slack = 1e-9;
      if (t.value > cap_t + 3.0 * t.standard_error + slack) {
        ok = false;
        detail = "type estimate " + std::to_string(t.value) + " above cap on " + g.space.describe();
      }
      if (c.value > cap_c + 3.0 * c.standard_error + slack) {
        ok = false;
        detail =
            "cotype estimate " + std::to_string(c.value) + " above cap on " + g.space.describe();
      }
      if (g.cls == SpaceClass::Hilbert && (t.value < 0.98 || t.value > 1.02 || c.value < 0.98 ||
                                           c.value > 1.02)) {
        ok = false;
        detail = "Hilbert estimate off unity on " + g.space.describe();
      }
      ++idx;
    }
    checks.run("table1-consistency", ok, detail);
  }

  // Bound calculus closed forms.
  {
    const double wb = wigner_bound(2, 0.01);
    const bool ok1 = std::abs(wb - 102.4) <= 1e-6 * 102.4;
    const auto hil = hilbert_route_type_bound(2);
    const double hil_expected = 4.0 * (1.0 + std::sqrt(2.0)) * std::log2(4.0);
    const bool ok2 = std::abs(hil.paper_final_form - hil_expected) <= 1e-9 * hil_expected;
    const bool ok3 = std::abs(replay_trace(hil) - hil.value) <= 1e-12 * std::max(1.0, hil.value);
    checks.run("bound-calculus", ok1 && ok2 && ok3,
               ok1 ? "" : "wigner_bound(2,0.01) = " + std::to_string(wb));
  }

  // Instance sweep from the configuration.
  const auto rows = run_sweep(config);
  {
    int failed = 0;
    for (const auto& r : rows)
      if (!r.pass) ++failed;
    std::string detail = std::to_string(rows.size()) + " rows";
    if (failed > 0) {
      for (const auto& r : rows)
        if (!r.pass) {
          detail += "; first failure d=" + std::to_string(r.d) + " eta=" + fmt17(r.eta) +
                    " seed=" + std::to_string(r.seed) + " [" + r.error + "]";
          break;
        }
    }
    checks.run("instance-sweep", failed == 0, detail);
  }

  // The opposite route gets one smoke instance so both halves of the
  // extension theory run in every invocation.
  {
    const Route other = config.route == Route::Wigner ? Route::Global : Route::Wigner;
    InstanceBudgets small = config.budgets;
    small.chain_samples = std::min(small.chain_samples, 300);
    bool ok = true;
    std::string detail;
    try {
      const auto inst = verify_instance(other, 2, 0.05, hash_combine(ms, 0xa17e0ULL), small,
                                        config.delta_floor);
      ok = inst.pass;
      detail = inst.failure;
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    checks.run("other-route", ok, detail);
  }

  out << (checks.failures == 0 ? "ALL CHECKS PASSED" : "CHECKS FAILED") << " ("
      << checks.failures << " failures)\n";
  return checks.failures == 0 ? 0 : 1;
}

}  // namespace banachlab
