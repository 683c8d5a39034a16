#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "banachlab/spaces.hpp"

namespace banachlab {

// Random sign/coefficient family for the second-moment averages. Exact
// enumeration is available for Rademacher signs with n <= 14 (it averages
// the 2^{n-1} patterns left after the global sign symmetry); everything
// else is Monte Carlo with a recorded sample count and standard error.
struct SignEnsemble {
  enum class Kind { Rademacher, Gaussian };
  Kind kind = Kind::Rademacher;
  bool exact = true;
  int mc_samples = 20000;
  std::uint64_t seed = 0;

  static SignEnsemble rademacher_exact() { return {Kind::Rademacher, true, 0, 0}; }
  static SignEnsemble rademacher_mc(int samples, std::uint64_t seed) {
    return {Kind::Rademacher, false, samples, seed};
  }
  static SignEnsemble gaussian(int samples = 20000, std::uint64_t seed = 0) {
    return {Kind::Gaussian, false, samples, seed};
  }
};

struct MomentEstimate {
  double value = 0.0;          // (E || sum gamma_j x_j ||^2)^{1/2}
  double standard_error = 0.0; // on `value`, zero when exact
  long samples = 0;
  bool exact = false;
};

MomentEstimate ensemble_second_moment(const NormedSpace& space,
                                      const std::vector<Eigen::VectorXd>& family,
                                      const SignEnsemble& ensemble);

struct RatioEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  MomentEstimate moment;
};

// Second moment over (sum ||x_j||^2)^{1/2}; any value is a lower bound on
// T_{2,n} of the space up to Monte Carlo error.
RatioEstimate type2_ratio(const NormedSpace& space, const std::vector<Eigen::VectorXd>& family,
                          const SignEnsemble& ensemble);
// (sum ||x_j||^2)^{1/2} over the second moment; lower bound on C_{2,n}.
RatioEstimate cotype2_ratio(const NormedSpace& space, const std::vector<Eigen::VectorXd>& family,
                            const SignEnsemble& ensemble);

struct OptimizationBudget {
  int restarts = 3;
  int steps = 250;
};

struct TypeEstimate {
  enum class Kind { Type2, Cotype2 };
  Kind kind = Kind::Type2;
  int n = 0;
  double value = 0.0;           // certified lower bound (up to MC error)
  double standard_error = 0.0;
  std::vector<Eigen::VectorXd> witness;
  SignEnsemble ensemble;
};

// Multi-start perturbation hill-climbing over witness families. The value
// is a lower bound on T_{2,n} / C_{2,n}; no claim of global optimality.
TypeEstimate estimate_type2(const NormedSpace& space, int n, const OptimizationBudget& budget,
                            std::uint64_t seed, const SignEnsemble& ensemble = SignEnsemble::rademacher_exact());
TypeEstimate estimate_cotype2(const NormedSpace& space, int n, const OptimizationBudget& budget,
                              std::uint64_t seed, const SignEnsemble& ensemble = SignEnsemble::rademacher_exact());

// Best-so-far curves for n = 1..n_max; each level warm-starts from the
// previous witness padded with a zero vector, which makes the curve
// nondecreasing by construction.
std::vector<TypeEstimate> estimate_type2_curve(const NormedSpace& space, int n_max,
                                               const OptimizationBudget& budget, std::uint64_t seed,
                                               const SignEnsemble& ensemble = SignEnsemble::rademacher_exact());
std::vector<TypeEstimate> estimate_cotype2_curve(const NormedSpace& space, int n_max,
                                                 const OptimizationBudget& budget, std::uint64_t seed,
                                                 const SignEnsemble& ensemble = SignEnsemble::rademacher_exact());

// Closed-form upper bounds for the Rademacher constants of the classical
// spaces. The l_inf type entry is printed without a universal constant and
// is flagged `asymptotic`; use consistency_cap for a bound that is safe to
// compare estimates against.
enum class SpaceClass { L1, Hilbert, Linf, S1, Sinf };
enum class ConstantKind { Type, Cotype };

struct Table1Bound {
  double value = 0.0;
  bool asymptotic = false;   // printed form lacks a universal constant
  bool gaussian = false;     // converted by gaussian_conversion_factor()
};

Table1Bound table1_upper(SpaceClass cls, int d, ConstantKind kind, double p_or_q,
                         bool gaussian = false);

// Rademacher and Gaussian averages agree up to sqrt(2/pi); converting an
// upper bound multiplies by the conservative factor sqrt(pi/2).
double gaussian_conversion_factor();

// Valid upper bound for estimate-vs-table consistency checks: identical to
// table1_upper except that the asymptotic l_inf type entry is replaced by
// the S_inf form, which dominates it through the isometric diagonal
// embedding l_inf^d c S_inf^d.
double consistency_cap(SpaceClass cls, int d, ConstantKind kind, double p_or_q,
                       bool gaussian = false);

SpaceClass classify_space(const NormedSpace& space);

}  // namespace banachlab
