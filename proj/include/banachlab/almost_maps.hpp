#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "banachlab/hermitian.hpp"
#include "banachlab/spaces.hpp"

namespace banachlab {

// A map on rank-one projections that preserves transition probabilities up
// to an additive error epsilon. Generators attach an analytic certificate
// and, when available, a pointwise displacement bound ||w(v) - Uv|| <= s
// against an exact reference symmetry (used by the Bloch oracle).
struct AlmostSymmetry {
  int dim = 0;
  std::function<RankOneProjection(const RankOneProjection&)> eval;
  std::optional<double> epsilon_certificate;
  std::optional<double> vector_displacement;
  std::string provenance;

  RankOneProjection operator()(const RankOneProjection& p) const { return eval(p); }
};

// Real-homogeneous map between normed spaces. linear_matrix is set when the
// map is linear by construction; delta_certificate records the analytic
// almost-linearity constant the generator can vouch for.
struct HomogeneousMap {
  NormedSpace domain;
  NormedSpace codomain;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::optional<Eigen::MatrixXd> linear_matrix;
  std::optional<double> delta_certificate;
  std::string provenance;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return eval(x); }
};

HomogeneousMap linear_map(NormedSpace domain, NormedSpace codomain, const Eigen::MatrixXd& m,
                          std::string provenance = "linear");
HomogeneousMap zero_map(NormedSpace domain, NormedSpace codomain);

// x -> U x U* (antiunitary: conjugate entrywise first). Exact symmetry,
// epsilon certificate 0.
AlmostSymmetry wigner_symmetry(const Eigen::MatrixXcd& u, bool antiunitary = false);

// vv* -> ww* with w = normalize(Uv + eta * xi(v)); the direction xi(v) is a
// unit vector derived deterministically from a hash of the canonical v, so
// the result is a genuine function on projections. Certificate:
// ||w - Uv|| <= 2 eta, hence epsilon <= 2(2s + s^2) with s = 2 eta,
// i.e. 8 eta + 8 eta^2.
AlmostSymmetry perturbed_symmetry(const Eigen::MatrixXcd& u, double eta, std::uint64_t seed);

// Sampled-and-refined lower bound on epsilon. Best-so-far over the budget,
// monotone under budget growth for a fixed seed.
double epsilon_estimate(const AlmostSymmetry& f, int pair_budget, std::uint64_t seed);

// Certified interval for the true epsilon of a d=2 almost-symmetry via a
// deterministic sphere-pair grid plus analytic slack from the generator's
// displacement bound. Requires vector_displacement.
struct EpsilonInterval {
  double lower = 0.0;
  double upper = 0.0;
  long grid_points = 0;
  double covering_radius = 0.0;  // Hilbert-Schmidt metric
};
EpsilonInterval epsilon_oracle_bloch(const AlmostSymmetry& f, int grid_resolution);

// Homogeneous extension of f from projections to the trace-norm sphere and
// beyond: pick the antipodal representative by the sign of the first
// nonzero coordinate, decompose it spectrally, push each rank-one component
// through f, and extend by homogeneity. Domain S_1^d, codomain S_2^d.
HomogeneousMap extend_projective(const AlmostSymmetry& f);

// Continuous function on the Hilbert-Schmidt unit ball together with the
// additive error it is certified for.
struct BallMap {
  int dim = 0;  // matrix dimension d
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::optional<double> epsilon_certificate;
  std::string provenance;
};

// Exact Hilbert-Schmidt symmetry restricted to the unit ball.
BallMap global_symmetry(const Eigen::MatrixXcd& u, bool antiunitary = false);
// f = (x -> U x U*) + eta * G(x) with a fixed continuous bounded
// perturbation field G drawn from the seed; certificate 2 eta + eta^2.
BallMap perturbed_global_symmetry(const Eigen::MatrixXcd& u, double eta, std::uint64_t seed);

// F(x) = ||x||_2 ( f(x / 2||x||_2) - f(-x / 2||x||_2) ), F(0) = 0.
// Odd and homogeneous by construction; delta certificate 4 sqrt(eps).
HomogeneousMap extend_global(const BallMap& f);

// Sampled-and-refined lower bound on the almost-linearity constant delta:
// max over families of ||sum lambda_i F(x_i) - F(sum lambda_i x_i)|| /
// sum |lambda_i| ||x_i||. Best-so-far over the budget.
double delta_estimate(const HomogeneousMap& f, int family_budget, int max_family_size,
                      std::uint64_t seed);

// Max over sampled pairs of |<F(x),F(y)> - <x,y>| / (||x||_2 ||y||_2) for
// maps between Hilbert-Schmidt spaces.
double wquasi_residual(const HomogeneousMap& f, int pair_samples, std::uint64_t seed);

// Largest sampled ||f(x) - F(x)||_2 over the unit ball; exercises the
// closeness guarantee of the global extension.
double ball_extension_gap(const BallMap& f, const HomogeneousMap& big_f, int samples,
                          std::uint64_t seed);

}  // namespace banachlab
