#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <string>

#include "banachlab/hermitian.hpp"
#include "banachlab/rng.hpp"

namespace banachlab {

struct TwistedSumSpace;  // defined in twisted.hpp

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SpaceKind { Lp, Schatten, Twisted };

struct DualNormResult {
  double value = 0.0;
  bool certified = true;  // exact closed form; false for sampled twisted duals
  long samples = 0;
};

// A norm oracle over a real coordinate space. Elements are real vectors:
// length d for l_r^d, length d^2 for the Hermitian Schatten class S_r^d
// (see hermitian.hpp for the coordinate basis), and dim(Y)+dim(X) for
// twisted sums, whose "norm" is the defining quasi-norm.
class NormedSpace {
 public:
  static NormedSpace lp(int d, double r);
  static NormedSpace schatten(int d, double r);
  static NormedSpace twisted(std::shared_ptr<const TwistedSumSpace> z);

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }           // real coordinate dimension
  double exponent() const { return r_; }     // r for lp/schatten
  int matrix_dim() const { return mat_dim_; }  // d for schatten
  std::string describe() const;

  double norm(const Eigen::VectorXd& x) const;

  // Norm of the dual space (r -> r' with 1/r + 1/r' = 1). For twisted
  // spaces the value is a sampled lower bound with the sample count
  // recorded and certified = false.
  DualNormResult dual_norm(const Eigen::VectorXd& xi) const;

  // Unit functional xi with <xi, w> = norm(w); lp/schatten only.
  Eigen::VectorXd dual_attaining(const Eigen::VectorXd& w) const;

  // Gaussian direction normalized to norm one; deterministic in the rng state.
  Eigen::VectorXd sample_unit(Rng& rng) const;
  Eigen::VectorXd sample_unit(std::uint64_t seed) const;

  const TwistedSumSpace& twisted_space() const;

  bool operator==(const NormedSpace& o) const {
    return kind_ == o.kind_ && dim_ == o.dim_ && r_ == o.r_ && z_ == o.z_;
  }

 private:
  NormedSpace(SpaceKind k, int dim, double r, int mat_dim) : kind_(k), dim_(dim), r_(r), mat_dim_(mat_dim) {}
  void check_dim(const Eigen::VectorXd& x) const;

  SpaceKind kind_;
  int dim_;
  double r_ = 2.0;
  int mat_dim_ = 0;
  std::shared_ptr<const TwistedSumSpace> z_;
};

// Free-function views of the space operations.
double norm(const NormedSpace& s, const Eigen::VectorXd& x);
DualNormResult dual_norm(const NormedSpace& s, const Eigen::VectorXd& xi);
Eigen::VectorXd sample_unit(const NormedSpace& s, std::uint64_t seed);

// (sum |v_i|^r)^(1/r) handling r = inf; shared by lp and Schatten paths.
double power_mean_norm(const Eigen::VectorXd& v, double r);
double conjugate_exponent(double r);

}  // namespace banachlab
