#include "banachlab/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "banachlab/tolerances.hpp"
#include "banachlab/twisted.hpp"

namespace banachlab {

double power_mean_norm(const Eigen::VectorXd& v, double r) {
  if (r == kInf) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (r == 1.0) return v.cwiseAbs().sum();
  if (r == 2.0) return v.norm();
  // Scale out the max to keep powers in range.
  const double m = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / m, r);
  return m * std::pow(acc, 1.0 / r);
}

double conjugate_exponent(double r) {
  if (r == 1.0) return kInf;
  if (r == kInf) return 1.0;
  return r / (r - 1.0);
}

NormedSpace NormedSpace::lp(int d, double r) {
  if (d < 1) throw std::invalid_argument("lp space needs d >= 1");
  if (r < 1.0) throw std::invalid_argument("lp exponent must satisfy r >= 1");
  return NormedSpace(SpaceKind::Lp, d, r, 0);
}

NormedSpace NormedSpace::schatten(int d, double r) {
  if (d < 1) throw std::invalid_argument("schatten space needs d >= 1");
  if (r < 1.0) throw std::invalid_argument("schatten exponent must satisfy r >= 1");
  return NormedSpace(SpaceKind::Schatten, d * d, r, d);
}

NormedSpace NormedSpace::twisted(std::shared_ptr<const TwistedSumSpace> z) {
  if (!z) throw std::invalid_argument("null twisted sum");
  NormedSpace s(SpaceKind::Twisted, z->Y.dim() + z->X.dim(), 0.0, 0);
  s.z_ = std::move(z);
  return s;
}

std::string NormedSpace::describe() const {
  switch (kind_) {
    case SpaceKind::Lp:
      return "l" + (r_ == kInf ? std::string("inf") : std::to_string(r_)) + "^" + std::to_string(dim_);
    case SpaceKind::Schatten:
      return "S" + (r_ == kInf ? std::string("inf") : std::to_string(r_)) + "^" + std::to_string(mat_dim_);
    case SpaceKind::Twisted:
      return "twisted(" + z_->Y.describe() + "," + z_->X.describe() + ")";
  }
  return "?";
}

void NormedSpace::check_dim(const Eigen::VectorXd& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("element dimension " + std::to_string(x.size()) +
                                " does not match space dimension " + std::to_string(dim_));
}

double NormedSpace::norm(const Eigen::VectorXd& x) const {
  check_dim(x);
  switch (kind_) {
    case SpaceKind::Lp:
      return power_mean_norm(x, r_);
    case SpaceKind::Schatten: {
      const Eigen::MatrixXcd m = coords_to_hermitian(x, mat_dim_);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
      return power_mean_norm(eig.eigenvalues(), r_);
    }
    case SpaceKind::Twisted:
      return quasi_norm(*z_, split_twisted(*z_, x));
  }
  return 0.0;
}

DualNormResult NormedSpace::dual_norm(const Eigen::VectorXd& xi) const {
  check_dim(xi);
  switch (kind_) {
    case SpaceKind::Lp:
      return {power_mean_norm(xi, conjugate_exponent(r_)), true, 0};
    case SpaceKind::Schatten: {
      const Eigen::MatrixXcd m = coords_to_hermitian(xi, mat_dim_);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
      return {power_mean_norm(eig.eigenvalues(), conjugate_exponent(r_)), true, 0};
    }
    case SpaceKind::Twisted: {
      // sup of xi over the quasi-norm unit ball, sampled on its two atom
      // families; the Y family has the exact closed form delta * ||eta||_Y*.
      const TwistedSumSpace& z = *z_;
      const Eigen::VectorXd eta = xi.head(z.Y.dim());
      const Eigen::VectorXd mu = xi.tail(z.X.dim());
      double best = z.delta * z.Y.dual_norm(eta).value;
      const long n_samples = 512;
      Rng rng(hash_bytes(xi.data(), sizeof(double) * xi.size()));
      for (long s = 0; s < n_samples; ++s) {
        const Eigen::VectorXd x = z.X.sample_unit(rng);
        const double v = std::abs(eta.dot(z.F.eval(x)) + mu.dot(x));
        if (v > best) best = v;
      }
      return {best, false, n_samples};
    }
  }
  return {};
}

Eigen::VectorXd NormedSpace::dual_attaining(const Eigen::VectorXd& w) const {
  check_dim(w);
  auto attaining_coeffs = [](const Eigen::VectorXd& v, double r) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(v.size());
    const double n = power_mean_norm(v, r);
    if (n == 0.0) return g;
    if (r == 1.0) {
      for (Eigen::Index i = 0; i < v.size(); ++i) g[i] = v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0);
    } else if (r == kInf) {
      Eigen::Index best = 0;
      v.cwiseAbs().maxCoeff(&best);
      g[best] = v[best] >= 0 ? 1.0 : -1.0;
    } else {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double s = v[i] >= 0 ? 1.0 : -1.0;
        g[i] = s * std::pow(std::abs(v[i]) / n, r - 1.0);
      }
    }
    return g;
  };
  switch (kind_) {
    case SpaceKind::Lp:
      return attaining_coeffs(w, r_);
    case SpaceKind::Schatten: {
      const Eigen::MatrixXcd m = coords_to_hermitian(w, mat_dim_);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
      const Eigen::VectorXd g = attaining_coeffs(eig.eigenvalues(), r_);
      Eigen::MatrixXcd xi = eig.eigenvectors() * g.asDiagonal() * eig.eigenvectors().adjoint();
      return hermitian_to_coords(xi);
    }
    case SpaceKind::Twisted:
      throw std::invalid_argument("dual_attaining is not available for twisted spaces");
  }
  return {};
}

Eigen::VectorXd NormedSpace::sample_unit(Rng& rng) const {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::VectorXd g = rng.gaussian_vector(dim_);
    const double n = norm(g);
    if (n > 10 * std::numeric_limits<double>::min() && std::isfinite(n)) return g / n;
  }
  throw std::runtime_error("sample_unit failed to draw a usable direction");
}

Eigen::VectorXd NormedSpace::sample_unit(std::uint64_t seed) const {
  Rng rng(seed);
  return sample_unit(rng);
}

const TwistedSumSpace& NormedSpace::twisted_space() const {
  if (kind_ != SpaceKind::Twisted) throw std::logic_error("not a twisted space");
  return *z_;
}

double norm(const NormedSpace& s, const Eigen::VectorXd& x) { return s.norm(x); }
DualNormResult dual_norm(const NormedSpace& s, const Eigen::VectorXd& xi) { return s.dual_norm(xi); }
Eigen::VectorXd sample_unit(const NormedSpace& s, std::uint64_t seed) { return s.sample_unit(seed); }

}  // namespace banachlab
