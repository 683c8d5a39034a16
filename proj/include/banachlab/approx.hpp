#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>

#include "banachlab/almost_maps.hpp"
#include "banachlab/bounds.hpp"
#include "banachlab/spaces.hpp"
#include "banachlab/twisted.hpp"

namespace banachlab {

// Best linear approximant in the Chebyshev sense: minimize over matrices H
// the sup over sampled unit-sphere points of ||F(x) - H x||_Y. Least
// squares provides the initial iterate, subgradient descent polishes the
// minimax objective, and adversarial resampling rounds append the current
// worst point found by hill-climbing until the residual stabilizes.
struct LinearMapFit {
  Eigen::MatrixXd matrix;
  double residual = 0.0;   // sampled sup, a lower bound on the true sup
  bool converged = true;
  int rounds = 0;
  long samples = 0;
};
LinearMapFit best_linear_map(const HomogeneousMap& f, int sample_budget,
                             double solver_tolerance, std::uint64_t seed);

// Sampled-and-refined sup of ||F(x) - H x||_Y / ||x||_X, either over the
// unit sphere of the domain or over rank-one projections (trace-norm one)
// when the instance is projective.
double approx_error(const HomogeneousMap& f, const Eigen::MatrixXd& h, int sample_budget,
                    std::uint64_t seed, bool over_projections = false);

// Sampled lower bound on the additive error of a ball map.
double global_epsilon_estimate(const BallMap& f, int pair_budget, std::uint64_t seed);

enum class Route { Wigner, Global };

struct InstanceBudgets {
  int eps_pairs = 120;
  int delta_families = 100;
  int delta_family_size = 4;
  int minimax_samples = 0;  // 0: choose from the dimensions
  int minimax_rounds = 3;
  int approx_samples = 150;
  int chain_samples = 400;  // residual/inner-product/closeness checks, global route
};

// One full stability experiment: generator, extension, twisted-sum bound
// chain, minimax approximation, and the inequality checks.
struct StabilityInstance {
  Route route = Route::Wigner;
  int d = 2;
  double eta = 0.0;
  std::uint64_t seed = 0;

  double epsilon_certificate = 0.0;
  double epsilon_lower = 0.0;   // sampled estimate
  double delta_used = 0.0;
  bool delta_floored = false;
  double delta_lower = 0.0;     // sampled estimate

  Eigen::MatrixXd h_matrix;
  double lhs_sphere = 0.0;      // sup ||F - H|| / ||x|| over the unit sphere
  double lhs_projective = 0.0;  // sup over rank-one projections (Wigner route)
  double thm1_rhs_value = 0.0;
  double route_bound = 0.0;     // wigner_bound/global_bound at the certificate, 0 when eta = 0

  BoundReport t2z_chain;              // lemma-consistent Caratheodory target
  BoundReport t2z_dual_chain;
  BoundReport t2z_dual_chain_printed; // the proof's printed target

  double eq12_ratio = 0.0;  // global route residual ratio, cap 4 sqrt(eps)
  double eq13_ratio = 0.0;  // inner-product ratio, cap 4 eps
  double eq14_gap = 0.0;    // sup ||f - F||_2 on the ball, cap 3 sqrt(eps)

  bool pass_delta = true;
  bool pass_thm1 = true;
  bool pass_route_bound = true;
  bool pass_chain = true;
  bool pass = true;
  std::string failure;

  std::shared_ptr<const HomogeneousMap> extension;
  std::shared_ptr<const AlmostSymmetry> projective_map;  // Wigner route
  std::shared_ptr<const BallMap> ball_map;               // global route
  std::shared_ptr<const TwistedSumSpace> twisted;        // Z = Y (+)_F X at delta_used
  Eigen::MatrixXcd unitary;
};

StabilityInstance verify_instance(Route route, int d, double eta, std::uint64_t seed,
                                  const InstanceBudgets& budgets = {},
                                  double delta_floor = 1e-9);

}  // namespace banachlab
