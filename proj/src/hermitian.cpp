#include "banachlab/hermitian.hpp"

#include <cmath>
#include <stdexcept>

#include "banachlab/tolerances.hpp"

namespace banachlab {

namespace {
constexpr double kSqrtHalf = 0.70710678118654752440;
using Complex = std::complex<double>;
}  // namespace

int hermitian_coord_dim(int d) { return d * d; }

int hermitian_matrix_dim(int coord_dim) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(coord_dim))));
  if (d * d != coord_dim) throw std::invalid_argument("coordinate length is not a perfect square");
  return d;
}

Eigen::VectorXd hermitian_to_coords(const Eigen::MatrixXcd& m) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd c(d * d);
  int k = 0;
  for (int i = 0; i < d; ++i) c[k++] = m(i, i).real();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      // <x, (E_ij+E_ji)/sqrt2> = sqrt2 * Re x_ij, <x, i(E_ij-E_ji)/sqrt2> = -sqrt2 * Im x_ij
      c[k++] = m(i, j).real() / kSqrtHalf;
      c[k++] = -m(i, j).imag() / kSqrtHalf;
    }
  return c;
}

Eigen::MatrixXcd coords_to_hermitian(const Eigen::VectorXd& c, int d) {
  if (c.size() != d * d) throw std::invalid_argument("coordinate length does not match dimension");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) m(i, i) = c[k++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double re = c[k++] * kSqrtHalf;
      const double im = -c[k++] * kSqrtHalf;
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  return m;
}

double hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

HermitianElement::HermitianElement(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("hermitian element must be square");
  const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tols().hermitian_entrywise)
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  m_ = 0.5 * (m_ + m_.adjoint().eval());  // symmetrize away the last ulps
}

HermitianElement HermitianElement::from_coords(const Eigen::VectorXd& c, int d) {
  return HermitianElement(coords_to_hermitian(c, d));
}

Eigen::VectorXcd canonical_phase(const Eigen::VectorXcd& v) {
  const double thr = tols().phase_nonzero;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mod = std::abs(v[i]);
    if (mod > thr) {
      return v * (std::conj(v[i]) / mod);
    }
  }
  throw std::invalid_argument("cannot canonicalize the phase of a zero vector");
}

RankOneProjection RankOneProjection::from_vector(const Eigen::VectorXcd& v) {
  const double n = v.norm();
  if (n <= tols().phase_nonzero) throw std::invalid_argument("zero vector has no projection");
  Eigen::VectorXcd u = v / n;
  return from_matrix(u * u.adjoint());
}

RankOneProjection RankOneProjection::from_matrix(const Eigen::MatrixXcd& p) {
  const double dev = (p - p.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tols().hermitian_entrywise)
    throw std::invalid_argument("projection matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(p);
  const int d = static_cast<int>(p.rows());
  const double top = eig.eigenvalues()[d - 1];
  if (std::abs(top - 1.0) > tols().projection_residual ||
      std::abs(p.trace().real() - 1.0) > tols().projection_residual)
    throw std::invalid_argument("matrix is not a rank-one projection");
  Eigen::VectorXcd v = canonical_phase(eig.eigenvectors().col(d - 1));
  v /= v.norm();
  RankOneProjection r;
  r.vector_ = v;
  r.matrix_ = v * v.adjoint();
  const double idem = (r.matrix_ * r.matrix_ - r.matrix_).norm();
  if (idem > tols().projection_residual)
    throw std::invalid_argument("projection failed the idempotency check");
  return r;
}

namespace {

// Orthonormal basis of the span of `cluster` columns obtained by projecting
// canonical basis vectors in index order and Gram-Schmidt filtering.
std::vector<Eigen::VectorXcd> canonical_cluster_basis(const Eigen::MatrixXcd& cluster) {
  const int d = static_cast<int>(cluster.rows());
  const int k = static_cast<int>(cluster.cols());
  const Eigen::MatrixXcd proj = cluster * cluster.adjoint();
  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(k);
  for (int e = 0; e < d && static_cast<int>(basis.size()) < k; ++e) {
    Eigen::VectorXcd w = proj.col(e);  // proj * e_e
    for (const auto& b : basis) w -= (b.adjoint() * w)(0) * b;
    const double n = w.norm();
    if (n > tols().degenerate_residual) basis.push_back(w / n);
  }
  // The canonical directions span the space except on a measure-zero set;
  // fall back to the raw eigenvectors if the filter came up short.
  for (int c = 0; c < k && static_cast<int>(basis.size()) < k; ++c) {
    Eigen::VectorXcd w = cluster.col(c);
    for (const auto& b : basis) w -= (b.adjoint() * w)(0) * b;
    const double n = w.norm();
    if (n > tols().degenerate_residual) basis.push_back(w / n);
  }
  return basis;
}

}  // namespace

std::vector<SpectralComponent> spectral_decompose(const Eigen::MatrixXcd& x) {
  const double dev = (x - x.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tols().hermitian_entrywise)
    throw std::invalid_argument("spectral_decompose expects a Hermitian matrix");
  const int d = static_cast<int>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(x);
  // Descending order.
  Eigen::VectorXd vals(d);
  Eigen::MatrixXcd vecs(d, d);
  for (int i = 0; i < d; ++i) {
    vals[i] = eig.eigenvalues()[d - 1 - i];
    vecs.col(i) = eig.eigenvectors().col(d - 1 - i);
  }
  const double scale = std::max(1.0, std::abs(vals[0]));
  const double cluster_tol = 1e-8 * scale;

  std::vector<SpectralComponent> out;
  out.reserve(d);
  int start = 0;
  while (start < d) {
    int end = start + 1;
    while (end < d && std::abs(vals[end] - vals[start]) <= cluster_tol) ++end;
    const Eigen::MatrixXcd cluster = vecs.middleCols(start, end - start);
    const auto basis = canonical_cluster_basis(cluster);
    for (int j = 0; j < end - start; ++j) {
      SpectralComponent c{vals[start + j], RankOneProjection::from_vector(basis[j])};
      out.push_back(std::move(c));
    }
    start = end;
  }
  return out;
}

std::vector<SpectralComponent> spectral_decompose(const HermitianElement& x) {
  return spectral_decompose(x.matrix());
}

Eigen::MatrixXcd haar_unitary(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary needs d >= 1");
  const Eigen::MatrixXcd a = rng.complex_gaussian_matrix(d, d);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mod = std::abs(rjj);
    const Complex phase = mod > 0 ? rjj / mod : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

Eigen::MatrixXcd haar_unitary(int d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d) return false;
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).norm() <= tol;
}

Eigen::MatrixXd conjugation_matrix(const Eigen::MatrixXcd& u, bool antiunitary) {
  const int d = static_cast<int>(u.rows());
  const int n = hermitian_coord_dim(d);
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd basis = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    basis[k] = 1.0;
    Eigen::MatrixXcd e = coords_to_hermitian(basis, d);
    if (antiunitary) e = e.conjugate();
    m.col(k) = hermitian_to_coords(u * e * u.adjoint());
    basis[k] = 0.0;
  }
  return m;
}

}  // namespace banachlab
