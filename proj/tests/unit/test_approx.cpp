#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "banachlab/approx.hpp"

using namespace banachlab;

TEST_CASE("best_linear_map recovers linear maps") {
  const auto space = NormedSpace::lp(4, 2.0);
  Rng rng(1);
  Eigen::MatrixXd a(4, 4);
  for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = rng.gaussian();
  const auto f = linear_map(space, space, a);
  const auto fit = best_linear_map(f, 80, 1e-6, 3);
  CHECK(fit.residual <= 1e-8);
  CHECK((fit.matrix - a).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("best_linear_map on an exact symmetry recovers the conjugation") {
  const auto u = haar_unitary(2, 91);
  const auto f = wigner_symmetry(u);
  const auto big = extend_projective(f);
  const auto fit = best_linear_map(big, 80, 1e-6, 5);
  CHECK(fit.residual <= 1e-6);
  const Eigen::MatrixXd m = conjugation_matrix(u);
  CHECK((fit.matrix - m).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("best_linear_map residual tracks a bounded nonlinearity") {
  // F = L + g with ||g(x)|| <= c ||x||: H = L witnesses residual <= c.
  const auto space = NormedSpace::lp(3, 2.0);
  Rng rng(2);
  Eigen::MatrixXd l(3, 3);
  for (int i = 0; i < 9; ++i) l(i / 3, i % 3) = rng.gaussian();
  const Eigen::VectorXd dir = rng.gaussian_vector(3).normalized();
  const Eigen::VectorXd out = rng.gaussian_vector(3).normalized();
  const double c = 0.05;
  HomogeneousMap f{space, space, {}, std::nullopt, std::nullopt, "linear-plus-bounded"};
  f.eval = [l, dir, out, c](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double n = x.norm();
    if (n == 0.0) return Eigen::VectorXd::Zero(3);
    return l * x + c * n * std::sin(dir.dot(x) / n) * out;
  };
  const auto fit = best_linear_map(f, 120, 1e-6, 7);
  CHECK(fit.residual <= c + 1e-6);
}

TEST_CASE("approx_error basics") {
  const auto space = NormedSpace::lp(3, 2.0);
  Rng rng(3);
  Eigen::MatrixXd a(3, 3);
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = rng.gaussian();
  const auto f = linear_map(space, space, a);
  CHECK(approx_error(f, a, 40, 1) == doctest::Approx(0.0).epsilon(1e-12));

  // H = 0 against an isometric extension: the error is the norm of F on
  // the sphere, which is exactly one over projections.
  const auto big = extend_projective(wigner_symmetry(haar_unitary(2, 92)));
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  const double e = approx_error(big, zero, 60, 2, true);
  CHECK(e == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fitted map beats the reference baselines") {
  const auto u = haar_unitary(2, 93);
  const auto f = perturbed_symmetry(u, 0.05, 17);
  const auto big = extend_projective(f);
  const auto fit = best_linear_map(big, 100, 1e-6, 9);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd conj = conjugation_matrix(u);
  for (const auto& baseline : {zero, eye, conj}) {
    CHECK(fit.residual <= approx_error(big, baseline, 60, 11) + 1e-9);
  }
}

TEST_CASE("verify_instance on an exact symmetry") {
  const auto inst = verify_instance(Route::Wigner, 2, 0.0, 5);
  CHECK(inst.epsilon_certificate == 0.0);
  CHECK(inst.epsilon_lower <= 1e-10);
  CHECK(inst.delta_floored);
  CHECK(inst.delta_used == doctest::Approx(1e-9));
  CHECK(inst.lhs_projective <= 1e-6);
  CHECK(inst.lhs_sphere <= 1e-6);
  const Eigen::MatrixXd conj = conjugation_matrix(inst.unitary);
  CHECK((inst.h_matrix - conj).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK(inst.pass);
}

TEST_CASE("verify_instance wigner route at d=2 eta=0.05") {
  const auto inst = verify_instance(Route::Wigner, 2, 0.05, 0);
  CHECK(inst.epsilon_certificate == doctest::Approx(0.42));
  CHECK(inst.route_bound == doctest::Approx(wigner_bound(2, 0.42)));
  CHECK(inst.route_bound == doctest::Approx(663.627847516965).epsilon(1e-9));
  CHECK(inst.lhs_projective <= inst.route_bound);
  CHECK(inst.lhs_sphere <= inst.thm1_rhs_value);
  CHECK(inst.delta_lower <= 2.0 * std::sqrt(0.42) + 1e-6);
  CHECK(inst.pass);
  CHECK(inst.twisted->delta == doctest::Approx(inst.delta_used));
}

TEST_CASE("verify_instance global route at d=3") {
  const auto inst = verify_instance(Route::Global, 3, 0.05, 1);
  const double eps = inst.epsilon_certificate;
  CHECK(eps == doctest::Approx(2.0 * 0.05 + 0.05 * 0.05));
  CHECK(inst.lhs_sphere <= global_bound(3, eps));
  CHECK(inst.eq12_ratio <= 4.0 * std::sqrt(eps) + 1e-6);
  CHECK(inst.eq13_ratio <= 4.0 * eps + 1e-6);
  CHECK(inst.eq14_gap <= 3.0 * std::sqrt(eps) + 1e-6);
  CHECK(inst.pass);
}

TEST_CASE("rhs scales with the certificate") {
  const auto small = verify_instance(Route::Wigner, 2, 0.01, 3);
  const auto large = verify_instance(Route::Wigner, 2, 0.05, 3);
  CHECK(large.epsilon_certificate > small.epsilon_certificate);
  CHECK(large.thm1_rhs_value >= small.thm1_rhs_value);
  CHECK(large.route_bound >= small.route_bound);
}

TEST_CASE("delta floor removal surfaces as a quasi-norm error") {
  CHECK_THROWS_WITH_AS((void)verify_instance(Route::Wigner, 2, 0.0, 5, InstanceBudgets{}, 0.0),
                       doctest::Contains("quasi-norm"), std::invalid_argument);
}
