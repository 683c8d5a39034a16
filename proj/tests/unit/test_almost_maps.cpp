#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>

#include "banachlab/almost_maps.hpp"
#include "banachlab/tolerances.hpp"

using namespace banachlab;
using Complex = std::complex<double>;

namespace {

RankOneProjection basis_projection(int d, int j) {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
  e[j] = 1.0;
  return RankOneProjection::from_vector(e);
}

double overlap(const RankOneProjection& a, const RankOneProjection& b) {
  return hs_inner(a.matrix(), b.matrix());
}

}  // namespace

TEST_CASE("wigner symmetry with U = I is the identity") {
  const auto f = wigner_symmetry(Eigen::MatrixXcd::Identity(3, 3));
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto p = RankOneProjection::from_vector(rng.complex_gaussian_vector(3));
    CHECK((f.eval(p).matrix() - p.matrix()).norm() <= 1e-12);
  }
  CHECK(*f.epsilon_certificate == 0.0);
}

TEST_CASE("wigner symmetries preserve transition probabilities exactly") {
  Rng rng(2);
  for (const bool anti : {false, true}) {
    const auto f = wigner_symmetry(haar_unitary(3, 77), anti);
    for (int t = 0; t < 50; ++t) {
      const auto p = RankOneProjection::from_vector(rng.complex_gaussian_vector(3));
      const auto q = RankOneProjection::from_vector(rng.complex_gaussian_vector(3));
      CHECK(std::abs(overlap(f.eval(p), f.eval(q)) - overlap(p, q)) <= 1e-10);
    }
  }
}

TEST_CASE("antiunitary symmetry with U = I transposes projections") {
  const auto f = wigner_symmetry(Eigen::MatrixXcd::Identity(2, 2), true);
  Rng rng(3);
  const auto p = RankOneProjection::from_vector(rng.complex_gaussian_vector(2));
  CHECK((f.eval(p).matrix() - p.matrix().transpose()).norm() <= 1e-12);
}

TEST_CASE("wigner symmetry rejects non-unitary input") {
  Eigen::MatrixXcd m = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS((void)wigner_symmetry(m), std::invalid_argument);
  CHECK_THROWS_AS((void)perturbed_symmetry(Eigen::MatrixXcd::Identity(2, 2), 0.7, 0),
                  std::invalid_argument);
}

TEST_CASE("perturbed symmetry at eta = 0 equals the exact symmetry") {
  const auto u = haar_unitary(3, 5);
  const auto f0 = perturbed_symmetry(u, 0.0, 9);
  const auto fw = wigner_symmetry(u);
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto p = RankOneProjection::from_vector(rng.complex_gaussian_vector(3));
    CHECK((f0.eval(p).matrix() - fw.eval(p).matrix()).norm() <= 1e-12);
  }
  CHECK(*f0.epsilon_certificate == 0.0);
}

TEST_CASE("perturbed symmetry outputs exact projections and is a function") {
  const auto f = perturbed_symmetry(haar_unitary(2, 6), 0.05, 13);
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const Eigen::VectorXcd v = rng.complex_gaussian_vector(2);
    const auto p = RankOneProjection::from_vector(v);
    const auto out = f.eval(p);
    CHECK((out.matrix() * out.matrix() - out.matrix()).norm() <= 1e-10);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) <= 1e-10);
    // Same projection twice gives bit-identical output.
    const auto out2 = f.eval(p);
    CHECK((out.matrix() - out2.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("epsilon estimates") {
  const auto exact = wigner_symmetry(haar_unitary(2, 21));
  CHECK(epsilon_estimate(exact, 40, 3) <= 1e-10);

  const auto f = perturbed_symmetry(haar_unitary(2, 22), 0.05, 1);
  const double est = epsilon_estimate(f, 120, 3);
  CHECK(est <= *f.epsilon_certificate);
  CHECK(est > 0.0);

  // Best-so-far semantics: doubling the budget never loses ground.
  CHECK(epsilon_estimate(f, 240, 3) >= est - 1e-15);

  // Constant map: the pair (e1 e1*, e2 e2*) has defect 1.
  AlmostSymmetry constant;
  constant.dim = 2;
  constant.eval = [](const RankOneProjection&) { return basis_projection(2, 0); };
  CHECK(epsilon_estimate(constant, 100, 4) >= 0.99);
}

TEST_CASE("bloch oracle brackets the true epsilon") {
  const auto exact = wigner_symmetry(haar_unitary(2, 31));
  const auto iv = epsilon_oracle_bloch(exact, 200);
  CHECK(iv.lower >= 0.0);
  CHECK(iv.upper <= 1e-6);
  CHECK(iv.lower <= iv.upper);

  const auto f = perturbed_symmetry(haar_unitary(2, 32), 0.05, 2);
  const auto pv = epsilon_oracle_bloch(f, 200);
  CHECK(pv.upper <= 8.0 * 0.05 + 8.0 * 0.05 * 0.05 + 1e-12);  // certificate 0.42
  CHECK(pv.lower <= pv.upper);
  // Interval validity against the independent estimator.
  const double est = epsilon_estimate(f, 2500, 7);
  CHECK(est >= pv.lower - 1e-9);
  CHECK(est <= pv.upper + 1e-9);

  AlmostSymmetry no_bound = f;
  no_bound.vector_displacement.reset();
  CHECK_THROWS_AS((void)epsilon_oracle_bloch(no_bound, 100), std::invalid_argument);
}

TEST_CASE("projective extension restricted to projections is f") {
  const auto f = perturbed_symmetry(haar_unitary(3, 41), 0.1, 5);
  const auto big = extend_projective(f);
  Rng rng(6);
  for (int t = 0; t < 25; ++t) {
    const auto p = RankOneProjection::from_vector(rng.complex_gaussian_vector(3));
    const Eigen::VectorXd via_f = f.eval(p).coords();
    const Eigen::VectorXd via_big = big.eval(p.coords());
    CHECK((via_f - via_big).norm() <= 1e-10);
  }
}

TEST_CASE("projective extension of the identity reconstructs the input") {
  const auto f = wigner_symmetry(Eigen::MatrixXcd::Identity(3, 3));
  const auto big = extend_projective(f);
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const Eigen::VectorXd x = rng.gaussian_vector(9);
    CHECK((big.eval(x) - x).norm() <= 1e-9 * std::max(1.0, x.norm()));
    CHECK((big.eval(-x) + big.eval(x)).norm() <= 1e-12);
  }
}

TEST_CASE("projective extension is homogeneous") {
  const auto f = perturbed_symmetry(haar_unitary(2, 43), 0.05, 3);
  const auto big = extend_projective(f);
  Rng rng(8);
  for (int t = 0; t < 40; ++t) {
    const Eigen::VectorXd x = rng.gaussian_vector(4);
    const double lam = rng.uniform(-10.0, 10.0);
    CHECK((big.eval(lam * x) - lam * big.eval(x)).norm() <=
          tols().homogeneity_map * std::max(1.0, std::abs(lam) * x.norm()));
  }
}

TEST_CASE("projective extension of a conjugation is that conjugation") {
  const auto u = haar_unitary(3, 44);
  const auto f = wigner_symmetry(u);
  const auto big = extend_projective(f);
  const Eigen::MatrixXd m = conjugation_matrix(u);
  Rng rng(9);
  for (int t = 0; t < 25; ++t) {
    const Eigen::VectorXd x = rng.gaussian_vector(9);
    CHECK((big.eval(x) - m * x).norm() <= 1e-9 * std::max(1.0, x.norm()));
  }
  CHECK(delta_estimate(big, 40, 4, 3) <= 1e-9);
}

TEST_CASE("delta estimates stay below analytic certificates") {
  // Linear map: the ratio vanishes.
  const auto space = NormedSpace::lp(3, 2.0);
  Rng mrng(10);
  Eigen::MatrixXd a(3, 3);
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = mrng.gaussian();
  CHECK(delta_estimate(linear_map(space, space, a), 60, 4, 1) <= 1e-9);

  // Projective route: delta <= 2 sqrt(eps).
  const auto f = perturbed_symmetry(haar_unitary(2, 45), 0.05, 11);
  const auto big = extend_projective(f);
  const double dl = delta_estimate(big, 150, 4, 2);
  CHECK(dl <= 2.0 * std::sqrt(*f.epsilon_certificate) + 1e-6);
  CHECK(*big.delta_certificate == doctest::Approx(2.0 * std::sqrt(0.42)));

  // Budget monotonicity.
  CHECK(delta_estimate(big, 300, 4, 2) >= dl - 1e-15);
}

TEST_CASE("global extension reduces to f for linear isometries") {
  const auto u = haar_unitary(3, 51);
  const auto f = global_symmetry(u);
  const auto big = extend_global(f);
  Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    Eigen::VectorXd x = rng.gaussian_vector(9);
    x *= rng.uniform() / std::max(x.norm(), 1e-300);
    CHECK((big.eval(x) - f.eval(x)).norm() <= 1e-12);
  }
}

TEST_CASE("global extension is odd and homogeneous") {
  const auto f = perturbed_global_symmetry(haar_unitary(2, 52), 0.1, 3);
  const auto big = extend_global(f);
  Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const Eigen::VectorXd x = rng.gaussian_vector(4);
    const double lam = rng.uniform(-8.0, 8.0);
    CHECK((big.eval(lam * x) - lam * big.eval(x)).norm() <=
          1e-10 * std::max(1.0, std::abs(lam) * x.norm()));
  }
}

TEST_CASE("global chain inequalities hold with certificates") {
  const double eta = 0.05;
  const auto f = perturbed_global_symmetry(haar_unitary(3, 53), eta, 5);
  const double eps = *f.epsilon_certificate;
  CHECK(eps == doctest::Approx(2.0 * eta + eta * eta));
  const auto big = extend_global(f);
  CHECK(*big.delta_certificate == doctest::Approx(4.0 * std::sqrt(eps)));

  // Residual ratio (unsigned family version of the almost-linearity bound).
  CHECK(delta_estimate(big, 150, 5, 1) <= 4.0 * std::sqrt(eps) + 1e-6);
  // Inner-product closeness of the extension.
  CHECK(wquasi_residual(big, 400, 2) <= 4.0 * eps + 1e-6);
  // Pointwise closeness on the ball.
  CHECK(ball_extension_gap(f, big, 1000, 3) <= 3.0 * std::sqrt(eps) + 1e-6);
}

TEST_CASE("wquasi residual scaling invariance and exact case") {
  const auto exact = extend_global(global_symmetry(haar_unitary(2, 54)));
  CHECK(wquasi_residual(exact, 100, 1) <= 1e-10);

  const auto f = perturbed_global_symmetry(haar_unitary(2, 55), 0.1, 7);
  const auto big = extend_global(f);
  Rng rng(13);
  const Eigen::VectorXd x = rng.gaussian_vector(4);
  const Eigen::VectorXd y = rng.gaussian_vector(4);
  auto residual = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::abs(big.eval(a).dot(big.eval(b)) - a.dot(b)) / (a.norm() * b.norm());
  };
  CHECK(residual(2.0 * x, y) == doctest::Approx(residual(x, y)).epsilon(1e-10));
}
