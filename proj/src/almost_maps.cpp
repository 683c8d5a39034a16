#include "banachlab/almost_maps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "banachlab/tolerances.hpp"

namespace banachlab {

namespace {

double projection_overlap(const RankOneProjection& a, const RankOneProjection& b) {
  return std::norm((a.vector().adjoint() * b.vector())(0, 0));
}

RankOneProjection haar_projection(int d, Rng& rng) {
  Eigen::VectorXcd v = rng.complex_gaussian_vector(d);
  return RankOneProjection::from_vector(v);
}

// Hash of the canonical vector quantized to a fixed 2^-30 grid, so that the
// last-ulp differences left by different computation paths through the same
// projection (spectral extraction, renormalization) collapse to one key.
std::uint64_t quantized_vector_hash(const Eigen::VectorXcd& v, std::uint64_t seed) {
  std::vector<long long> q(2 * v.size());
  const double scale = 1073741824.0;  // 2^30
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    q[2 * i] = std::llround(v[i].real() * scale);
    q[2 * i + 1] = std::llround(v[i].imag() * scale);
  }
  return hash_combine(seed, hash_bytes(q.data(), sizeof(long long) * q.size()));
}

}  // namespace

HomogeneousMap linear_map(NormedSpace domain, NormedSpace codomain, const Eigen::MatrixXd& m,
                          std::string provenance) {
  if (m.rows() != codomain.dim() || m.cols() != domain.dim())
    throw std::invalid_argument("linear map shape does not match the spaces");
  HomogeneousMap f{std::move(domain), std::move(codomain), {}, m, 0.0, std::move(provenance)};
  f.eval = [m](const Eigen::VectorXd& x) { return (m * x).eval(); };
  return f;
}

HomogeneousMap zero_map(NormedSpace domain, NormedSpace codomain) {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Zero(codomain.dim(), domain.dim());
  return linear_map(std::move(domain), std::move(codomain), m, "zero");
}

AlmostSymmetry wigner_symmetry(const Eigen::MatrixXcd& u, bool antiunitary) {
  if (!is_unitary(u, tols().unitarity))
    throw std::invalid_argument("wigner_symmetry requires a unitary matrix");
  AlmostSymmetry f;
  f.dim = static_cast<int>(u.rows());
  f.epsilon_certificate = 0.0;
  f.vector_displacement = 0.0;
  f.provenance = antiunitary ? "wigner-antiunitary" : "wigner-unitary";
  f.eval = [u, antiunitary](const RankOneProjection& p) {
    Eigen::VectorXcd v = p.vector();
    if (antiunitary) v = v.conjugate().eval();
    return RankOneProjection::from_vector(u * v);
  };
  return f;
}

AlmostSymmetry perturbed_symmetry(const Eigen::MatrixXcd& u, double eta, std::uint64_t seed) {
  if (!is_unitary(u, tols().unitarity))
    throw std::invalid_argument("perturbed_symmetry requires a unitary matrix");
  if (eta < 0.0 || eta > 0.5)
    throw std::invalid_argument("perturbed_symmetry needs 0 <= eta <= 1/2");
  AlmostSymmetry f;
  const int d = static_cast<int>(u.rows());
  f.dim = d;
  // The perturbed unit vector satisfies ||w - Uv|| <= 2 eta; two unit
  // vectors moved by at most s change |<.,.>| by at most 2s + s^2 and the
  // squared overlap by at most twice that.
  f.vector_displacement = 2.0 * eta;
  f.epsilon_certificate = 8.0 * eta + 8.0 * eta * eta;
  f.provenance = "perturbed eta=" + std::to_string(eta);
  f.eval = [u, eta, seed, d](const RankOneProjection& p) {
    const Eigen::VectorXcd& v = p.vector();
    if (eta == 0.0) return RankOneProjection::from_vector(u * v);
    Rng dir(quantized_vector_hash(v, seed));
    Eigen::VectorXcd xi = dir.complex_gaussian_vector(d);
    xi /= xi.norm();
    return RankOneProjection::from_vector(u * v + eta * xi);
  };
  return f;
}

double epsilon_estimate(const AlmostSymmetry& f, int pair_budget, std::uint64_t seed) {
  const int d = f.dim;
  const Rng root = Rng(seed).child(0x45505321ULL);
  double best = 0.0;
  // Each budget unit draws one pair and polishes it briefly; units use
  // child generators indexed by position, so a longer run extends a shorter
  // one and the best-so-far value is monotone in the budget.
  for (int k = 0; k < pair_budget; ++k) {
    Rng rng = root.child(static_cast<std::uint64_t>(k));
    Eigen::VectorXcd v = rng.complex_gaussian_vector(d);
    Eigen::VectorXcd w = rng.complex_gaussian_vector(d);
    auto value = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
      const RankOneProjection p = RankOneProjection::from_vector(a);
      const RankOneProjection q = RankOneProjection::from_vector(b);
      return std::abs(projection_overlap(f.eval(p), f.eval(q)) - projection_overlap(p, q));
    };
    double cur = value(v, w);
    double step = 0.5;
    for (int it = 0; it < 24; ++it) {
      const bool move_v = rng.uniform() < 0.5;
      Eigen::VectorXcd cand_v = v;
      Eigen::VectorXcd cand_w = w;
      (move_v ? cand_v : cand_w) += step * rng.complex_gaussian_vector(d);
      const double cand = value(cand_v, cand_w);
      if (cand > cur) {
        cur = cand;
        v = cand_v;
        w = cand_w;
      } else {
        step *= 0.8;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

namespace {

struct BlochGrid {
  std::vector<Eigen::Vector3d> points;
  double covering_hs = 0.0;  // Hilbert-Schmidt covering radius
};

// Deterministic band grid on the sphere with a provable covering radius:
// any point reaches a grid point by moving along its meridian to the band
// latitude (<= pi/2B) and then along the band circle (<= sin(theta_i) *
// pi/m_i).
BlochGrid bloch_band_grid(int target_points) {
  const double pi = 3.14159265358979323846;
  const int bands = std::max(2, static_cast<int>(std::lround(std::sqrt(target_points * pi / 4.0))));
  BlochGrid g;
  double worst = 0.0;
  for (int i = 0; i < bands; ++i) {
    const double theta = (i + 0.5) * pi / bands;
    const double s = std::sin(theta);
    const int m = std::max(1, static_cast<int>(std::lround(2.0 * bands * s)));
    worst = std::max(worst, pi / (2.0 * bands) + s * pi / m);
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * pi * (j + 0.5) / m;
      g.points.emplace_back(s * std::cos(phi), s * std::sin(phi), std::cos(theta));
    }
  }
  // Chord length is bounded by arc length; ||P - Q||_2 = |n - m| / sqrt(2).
  g.covering_hs = worst / std::sqrt(2.0);
  return g;
}

RankOneProjection bloch_projection(const Eigen::Vector3d& n) {
  Eigen::MatrixXcd p(2, 2);
  const std::complex<double> i01(n.x() / 2.0, -n.y() / 2.0);
  p << std::complex<double>((1.0 + n.z()) / 2.0, 0.0), i01, std::conj(i01),
      std::complex<double>((1.0 - n.z()) / 2.0, 0.0);
  return RankOneProjection::from_matrix(p);
}

Eigen::Vector3d bloch_vector(const RankOneProjection& p) {
  const Eigen::MatrixXcd& m = p.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), m(0, 0).real() - m(1, 1).real()};
}

}  // namespace

EpsilonInterval epsilon_oracle_bloch(const AlmostSymmetry& f, int grid_resolution) {
  if (f.dim != 2) throw std::invalid_argument("the Bloch oracle works on d = 2 only");
  if (!f.vector_displacement)
    throw std::invalid_argument("the Bloch oracle needs a continuity (displacement) bound");
  const BlochGrid grid = bloch_band_grid(std::max(grid_resolution, 8));
  const long n = static_cast<long>(grid.points.size());

  std::vector<Eigen::Vector3d> image(n);
  for (long i = 0; i < n; ++i) image[i] = bloch_vector(f.eval(bloch_projection(grid.points[i])));

  // <P,Q> = (1 + n.m)/2, so the defect for a pair is |nf.mf - n.m| / 2.
  double lower = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = i; j < n; ++j) {
      const double defect =
          std::abs(image[i].dot(image[j]) - grid.points[i].dot(grid.points[j])) / 2.0;
      lower = std::max(lower, defect);
    }

  const double s = *f.vector_displacement;
  const double h = grid.covering_hs;
  // Two independent upper routes: a pointwise displacement bound against
  // the exact reference symmetry, and grid value plus metric slack (the
  // reference part is a Hilbert-Schmidt isometry, projections move by at
  // most sqrt(2) s, inner products are 1-Lipschitz per argument).
  const double upper_displacement = 2.0 * (2.0 * s + s * s);
  const double upper_grid = lower + 4.0 * h + 4.0 * std::sqrt(2.0) * s;
  EpsilonInterval out;
  out.lower = lower;
  out.upper = std::min(1.0, std::max(lower, std::min(upper_displacement, upper_grid)));
  out.grid_points = n;
  out.covering_radius = h;
  return out;
}

HomogeneousMap extend_projective(const AlmostSymmetry& f) {
  const int d = f.dim;
  NormedSpace dom = NormedSpace::schatten(d, 1.0);
  NormedSpace cod = NormedSpace::schatten(d, 2.0);
  HomogeneousMap F{dom, cod, {}, std::nullopt, std::nullopt,
                   "extend_projective(" + f.provenance + ")"};
  if (f.epsilon_certificate)
    F.delta_certificate = 2.0 * std::sqrt(*f.epsilon_certificate);
  const double sign_tol = tols().antipodal_sign;
  F.eval = [f, d, dom, sign_tol](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double t = dom.norm(x);
    if (t == 0.0) return Eigen::VectorXd::Zero(d * d);
    // Antipodal representative: flip so the first nonzero coordinate of the
    // vectorization is positive, remember the flip in sigma.
    double sigma = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) > sign_tol) {
        sigma = x[i] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    const Eigen::VectorXd rep = (sigma / t) * x;
    const auto comps = spectral_decompose(coords_to_hermitian(rep, d));
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& c : comps) acc += c.eigenvalue * f.eval(c.projection).matrix();
    return (t * sigma) * hermitian_to_coords(acc);
  };
  return F;
}

BallMap global_symmetry(const Eigen::MatrixXcd& u, bool antiunitary) {
  if (!is_unitary(u, tols().unitarity))
    throw std::invalid_argument("global_symmetry requires a unitary matrix");
  const Eigen::MatrixXd m = conjugation_matrix(u, antiunitary);
  BallMap f;
  f.dim = static_cast<int>(u.rows());
  f.epsilon_certificate = 0.0;
  f.provenance = "global-symmetry";
  f.eval = [m](const Eigen::VectorXd& x) { return (m * x).eval(); };
  return f;
}

BallMap perturbed_global_symmetry(const Eigen::MatrixXcd& u, double eta, std::uint64_t seed) {
  if (!is_unitary(u, tols().unitarity))
    throw std::invalid_argument("perturbed_global_symmetry requires a unitary matrix");
  if (eta < 0.0 || eta > 0.5)
    throw std::invalid_argument("perturbed_global_symmetry needs 0 <= eta <= 1/2");
  const int d = static_cast<int>(u.rows());
  const int n = hermitian_coord_dim(d);
  const Eigen::MatrixXd m = conjugation_matrix(u, false);
  Rng rng(hash_combine(seed, 0x474c4f42ULL));
  // Smooth bounded perturbation field: two sine ridges along fixed random
  // directions, ||G(x)||_2 <= 1 on the whole space.
  Eigen::VectorXd a1 = rng.gaussian_vector(n).normalized();
  Eigen::VectorXd a2 = rng.gaussian_vector(n).normalized();
  Eigen::VectorXd m1 = rng.gaussian_vector(n).normalized();
  Eigen::VectorXd m2 = rng.gaussian_vector(n).normalized();
  const double p1 = rng.uniform(0.0, 6.28);
  const double p2 = rng.uniform(0.0, 6.28);
  BallMap f;
  f.dim = d;
  // |<f(x),f(y)> - <x,y>| <= eta ||x|| + eta ||y|| + eta^2 <= 2 eta + eta^2
  // on the unit ball.
  f.epsilon_certificate = 2.0 * eta + eta * eta;
  f.provenance = "perturbed-global eta=" + std::to_string(eta);
  f.eval = [m, eta, a1, a2, m1, m2, p1, p2](const Eigen::VectorXd& x) {
    const Eigen::VectorXd g =
        0.5 * (std::sin(3.0 * a1.dot(x) + p1) * m1 + std::sin(5.0 * a2.dot(x) + p2) * m2);
    return (m * x + eta * g).eval();
  };
  return f;
}

HomogeneousMap extend_global(const BallMap& f) {
  const int d = f.dim;
  NormedSpace space = NormedSpace::schatten(d, 2.0);
  HomogeneousMap F{space, space, {}, std::nullopt, std::nullopt,
                   "extend_global(" + f.provenance + ")"};
  if (f.epsilon_certificate)
    F.delta_certificate = 4.0 * std::sqrt(*f.epsilon_certificate);
  const int n = hermitian_coord_dim(d);
  F.eval = [f, n](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double t = x.norm();  // coordinates are orthonormal: ||.||_2 = HS norm
    if (t == 0.0) return Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd a = x / (2.0 * t);
    return t * (f.eval(a) - f.eval(-a));
  };
  return F;
}

double delta_estimate(const HomogeneousMap& f, int family_budget, int max_family_size,
                      std::uint64_t seed) {
  if (max_family_size < 2) throw std::invalid_argument("delta_estimate needs families of size >= 2");
  const Rng root = Rng(seed).child(0x44454c54ULL);
  double best = 0.0;
  for (int k = 0; k < family_budget; ++k) {
    Rng rng = root.child(static_cast<std::uint64_t>(k));
    const int n = rng.uniform_int(2, max_family_size);
    std::vector<Eigen::VectorXd> xs(n);
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = f.domain.sample_unit(rng);
      lambda[i] = rng.gaussian();
    }
    auto ratio = [&](const std::vector<Eigen::VectorXd>& x, const Eigen::VectorXd& l) {
      Eigen::VectorXd sum_fx = Eigen::VectorXd::Zero(f.codomain.dim());
      Eigen::VectorXd sum_x = Eigen::VectorXd::Zero(f.domain.dim());
      double den = 0.0;
      for (int i = 0; i < n; ++i) {
        sum_fx += l[i] * f.eval(x[i]);
        sum_x += l[i] * x[i];
        den += std::abs(l[i]) * f.domain.norm(x[i]);
      }
      if (den < 1e-12) return 0.0;
      return f.codomain.norm(sum_fx - f.eval(sum_x)) / den;
    };
    double cur = ratio(xs, lambda);
    double step = 0.4;
    for (int it = 0; it < 24; ++it) {
      std::vector<Eigen::VectorXd> cx = xs;
      Eigen::VectorXd cl = lambda;
      const int i = rng.uniform_int(0, n - 1);
      if (rng.uniform() < 0.5) {
        cl[i] += step * rng.gaussian();
      } else {
        Eigen::VectorXd cand = cx[i] + step * rng.gaussian_vector(f.domain.dim());
        const double cn = f.domain.norm(cand);
        if (cn < 1e-12) continue;
        cx[i] = cand / cn;
      }
      const double cand = ratio(cx, cl);
      if (cand > cur) {
        cur = cand;
        xs = std::move(cx);
        lambda = std::move(cl);
      } else {
        step *= 0.85;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

double wquasi_residual(const HomogeneousMap& f, int pair_samples, std::uint64_t seed) {
  const Rng root = Rng(seed).child(0x57515541ULL);
  double best = 0.0;
  for (int k = 0; k < pair_samples; ++k) {
    Rng rng = root.child(static_cast<std::uint64_t>(k));
    const Eigen::VectorXd x = rng.gaussian_vector(f.domain.dim());
    const Eigen::VectorXd y = rng.gaussian_vector(f.domain.dim());
    const double nx = x.norm();
    const double ny = y.norm();
    if (nx < 1e-12 || ny < 1e-12) continue;
    const double r = std::abs(f.eval(x).dot(f.eval(y)) - x.dot(y)) / (nx * ny);
    best = std::max(best, r);
  }
  return best;
}

double ball_extension_gap(const BallMap& f, const HomogeneousMap& big_f, int samples,
                          std::uint64_t seed) {
  const int n = hermitian_coord_dim(f.dim);
  const Rng root = Rng(seed).child(0x47415021ULL);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Rng rng = root.child(static_cast<std::uint64_t>(k));
    Eigen::VectorXd x = rng.gaussian_vector(n);
    const double nx = x.norm();
    if (nx < 1e-12) continue;
    x *= rng.uniform() / nx;  // radius in [0, 1)
    worst = std::max(worst, (f.eval(x) - big_f.eval(x)).norm());
  }
  return worst;
}

}  // namespace banachlab
