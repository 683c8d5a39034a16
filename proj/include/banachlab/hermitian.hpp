#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "banachlab/rng.hpp"

namespace banachlab {

// The d x d complex Hermitian matrices form a real vector space of
// dimension d^2. We fix once and for all the orthonormal coordinate basis
//   E_ii                      for i = 0..d-1,
//   (E_ij + E_ji)/sqrt(2)     and
//   (i E_ij - i E_ji)/sqrt(2) interleaved for i < j in row-major order,
// so that the Hilbert-Schmidt inner product <x,y> = tr(xy) becomes the
// Euclidean dot product of coordinate vectors.
int hermitian_coord_dim(int d);
int hermitian_matrix_dim(int coord_dim);

Eigen::VectorXd hermitian_to_coords(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd coords_to_hermitian(const Eigen::VectorXd& c, int d);

double hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Validated Hermitian element.
class HermitianElement {
 public:
  explicit HermitianElement(Eigen::MatrixXcd m);  // throws if not Hermitian
  static HermitianElement from_coords(const Eigen::VectorXd& c, int d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::VectorXd coords() const { return hermitian_to_coords(m_); }
  double inner(const HermitianElement& o) const { return hs_inner(m_, o.m_); }

 private:
  Eigen::MatrixXcd m_;
};

// Phase canonicalization: multiply v by the phase making its first
// coordinate of modulus > tol real and positive. Throws on (numerically)
// zero vectors.
Eigen::VectorXcd canonical_phase(const Eigen::VectorXcd& v);

// Rank-one projection vv* with the canonical-phase unit vector recovered
// from the matrix, so that the stored vector is a function of the
// projection alone.
class RankOneProjection {
 public:
  static RankOneProjection from_vector(const Eigen::VectorXcd& v);
  static RankOneProjection from_matrix(const Eigen::MatrixXcd& p);

  int dim() const { return static_cast<int>(vector_.size()); }
  const Eigen::VectorXcd& vector() const { return vector_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::VectorXd coords() const { return hermitian_to_coords(matrix_); }

 private:
  RankOneProjection() = default;
  Eigen::VectorXcd vector_;
  Eigen::MatrixXcd matrix_;
};

struct SpectralComponent {
  double eigenvalue;
  RankOneProjection projection;
};

// Deterministic spectral decomposition: eigenvalues descending; inside a
// degenerate cluster the rank-one basis comes from orthonormalizing the
// projections of the canonical basis vectors onto the eigenspace in index
// order, skipping directions whose residual falls below the configured
// threshold. The output reconstructs the input and is a fixed point of the
// procedure.
std::vector<SpectralComponent> spectral_decompose(const Eigen::MatrixXcd& x);
std::vector<SpectralComponent> spectral_decompose(const HermitianElement& x);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the
// diagonal phase correction. Deterministic given the seed.
Eigen::MatrixXcd haar_unitary(int d, std::uint64_t seed);
Eigen::MatrixXcd haar_unitary(int d, Rng& rng);

bool is_unitary(const Eigen::MatrixXcd& u, double tol);

// Real matrix acting on hermitian coordinates that implements
// x -> U x U* (or U conj(x) U* when antiunitary is set).
Eigen::MatrixXd conjugation_matrix(const Eigen::MatrixXcd& u, bool antiunitary = false);

}  // namespace banachlab
