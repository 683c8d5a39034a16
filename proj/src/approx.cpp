#include "banachlab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "banachlab/tolerances.hpp"
#include "banachlab/type_cotype.hpp"

namespace banachlab {

namespace {

double sampled_sup(const HomogeneousMap& f, const Eigen::MatrixXd& h,
                   const std::vector<Eigen::VectorXd>& points) {
  double sup = 0.0;
  for (const auto& x : points) sup = std::max(sup, f.codomain.norm(f.eval(x) - h * x));
  return sup;
}

// Hill-climb the residual over the unit sphere of the domain.
Eigen::VectorXd adversarial_point(const HomogeneousMap& f, const Eigen::MatrixXd& h, Rng& rng,
                                  const Eigen::VectorXd* warm, double* value) {
  const int dim = f.domain.dim();
  Eigen::VectorXd best_x;
  double best = -1.0;
  for (int start = 0; start < 5; ++start) {
    Eigen::VectorXd x = (start == 0 && warm) ? *warm : f.domain.sample_unit(rng);
    double cur = f.codomain.norm(f.eval(x) - h * x);
    double step = 0.4;
    for (int it = 0; it < 50; ++it) {
      Eigen::VectorXd cand = x + step * rng.gaussian_vector(dim);
      const double n = f.domain.norm(cand);
      if (n < 1e-12) continue;
      cand /= n;
      const double cv = f.codomain.norm(f.eval(cand) - h * cand);
      if (cv > cur) {
        cur = cv;
        x = cand;
      } else {
        step *= 0.85;
      }
    }
    if (cur > best) {
      best = cur;
      best_x = x;
    }
  }
  *value = best;
  return best_x;
}

}  // namespace

LinearMapFit best_linear_map(const HomogeneousMap& f, int sample_budget, double solver_tolerance,
                             std::uint64_t seed) {
  const int dim_x = f.domain.dim();
  const int dim_y = f.codomain.dim();
  const Rng root = Rng(seed).child(0x4d4d4158ULL);
  Rng rng = root.child(0);

  const int n_samples = std::max({sample_budget, 2 * dim_x, 32});
  std::vector<Eigen::VectorXd> points;
  points.reserve(n_samples);
  std::vector<Eigen::VectorXd> images;
  images.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    points.push_back(f.domain.sample_unit(rng));
    images.push_back(f.eval(points.back()));
  }

  auto least_squares = [&]() {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim_x, dim_x);
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(dim_y, dim_x);
    for (std::size_t s = 0; s < points.size(); ++s) {
      gram += points[s] * points[s].transpose();
      cross += images[s] * points[s].transpose();
    }
    gram.diagonal().array() += 1e-12;
    return Eigen::MatrixXd(gram.ldlt().solve(cross.transpose()).transpose());
  };

  Eigen::MatrixXd h = least_squares();
  double objective = sampled_sup(f, h, points);

  auto polish = [&](Eigen::MatrixXd& h_io, double& obj_io, int iters) {
    Eigen::MatrixXd best_h = h_io;
    double best = obj_io;
    Eigen::MatrixXd cur = h_io;
    const double scale = std::max(best, solver_tolerance);
    for (int t = 0; t < iters; ++t) {
      // Subgradient of the max: dual-attaining functional at the worst
      // sample tensored with that sample.
      int worst = 0;
      double worst_val = -1.0;
      for (std::size_t s = 0; s < points.size(); ++s) {
        const double v = f.codomain.norm(images[s] - cur * points[s]);
        if (v > worst_val) {
          worst_val = v;
          worst = static_cast<int>(s);
        }
      }
      if (worst_val < solver_tolerance) break;
      const Eigen::VectorXd r = images[worst] - cur * points[worst];
      const Eigen::VectorXd g = f.codomain.dual_attaining(r);
      const double step = 0.5 * scale / std::sqrt(t + 1.0);
      cur += step * g * points[worst].transpose();
      const double v = sampled_sup(f, cur, points);
      if (v < best) {
        best = v;
        best_h = cur;
      }
    }
    h_io = best_h;
    obj_io = best;
  };

  LinearMapFit fit;
  fit.rounds = 0;
  const int polish_iters = 60 * dim_x;
  if (objective > solver_tolerance) polish(h, objective, polish_iters);

  double reported = objective;
  bool converged = true;
  const int max_rounds = 6;
  int round = 0;
  Eigen::VectorXd warm;
  for (; round < max_rounds; ++round) {
    double adv_val = 0.0;
    Rng arng = root.child(1000 + round);
    const Eigen::VectorXd adv =
        adversarial_point(f, h, arng, warm.size() ? &warm : nullptr, &adv_val);
    warm = adv;
    const double prev = reported;
    reported = std::max(reported, adv_val);
    if (adv_val <= std::max(objective * 1.01, objective + solver_tolerance)) {
      converged = true;
      break;
    }
    points.push_back(adv);
    images.push_back(f.eval(adv));
    h = least_squares();
    objective = sampled_sup(f, h, points);
    if (objective > solver_tolerance) polish(h, objective, polish_iters);
    reported = objective;
    converged = std::abs(reported - prev) <= 0.01 * std::max(prev, solver_tolerance);
  }

  fit.matrix = h;
  fit.residual = std::max(objective, reported);
  fit.converged = converged || round < max_rounds;
  fit.rounds = round;
  fit.samples = static_cast<long>(points.size());
  return fit;
}

double approx_error(const HomogeneousMap& f, const Eigen::MatrixXd& h, int sample_budget,
                    std::uint64_t seed, bool over_projections) {
  const Rng root = Rng(seed).child(0x41505052ULL);
  double sup = 0.0;
  if (!over_projections) {
    for (int k = 0; k < sample_budget; ++k) {
      Rng rng = root.child(static_cast<std::uint64_t>(k));
      Eigen::VectorXd x = f.domain.sample_unit(rng);
      double cur = f.codomain.norm(f.eval(x) - h * x);
      double step = 0.4;
      for (int it = 0; it < 16; ++it) {
        Eigen::VectorXd cand = x + step * rng.gaussian_vector(f.domain.dim());
        const double n = f.domain.norm(cand);
        if (n < 1e-12) continue;
        cand /= n;
        const double cv = f.codomain.norm(f.eval(cand) - h * cand);
        if (cv > cur) {
          cur = cv;
          x = cand;
        } else {
          step *= 0.8;
        }
      }
      sup = std::max(sup, cur);
    }
    return sup;
  }
  if (f.domain.kind() != SpaceKind::Schatten)
    throw std::invalid_argument("projective approx_error needs a Schatten domain");
  const int d = f.domain.matrix_dim();
  auto value = [&](const Eigen::VectorXcd& v) {
    const Eigen::VectorXd p = RankOneProjection::from_vector(v).coords();
    return f.codomain.norm(f.eval(p) - h * p);
  };
  for (int k = 0; k < sample_budget; ++k) {
    Rng rng = root.child(static_cast<std::uint64_t>(k));
    Eigen::VectorXcd v = rng.complex_gaussian_vector(d);
    double cur = value(v);
    double step = 0.5;
    for (int it = 0; it < 16; ++it) {
      Eigen::VectorXcd cand = v + step * rng.complex_gaussian_vector(d);
      if (cand.norm() < 1e-12) continue;
      const double cv = value(cand);
      if (cv > cur) {
        cur = cv;
        v = cand;
      } else {
        step *= 0.8;
      }
    }
    sup = std::max(sup, cur);
  }
  return sup;
}

double global_epsilon_estimate(const BallMap& f, int pair_budget, std::uint64_t seed) {
  const int n = hermitian_coord_dim(f.dim);
  const Rng root = Rng(seed).child(0x47455053ULL);
  double best = 0.0;
  for (int k = 0; k < pair_budget; ++k) {
    Rng rng = root.child(static_cast<std::uint64_t>(k));
    auto ball_point = [&]() {
      Eigen::VectorXd x = rng.gaussian_vector(n);
      const double nx = x.norm();
      return Eigen::VectorXd(x * (rng.uniform() / std::max(nx, 1e-300)));
    };
    Eigen::VectorXd x = ball_point();
    Eigen::VectorXd y = ball_point();
    auto value = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      return std::abs(f.eval(a).dot(f.eval(b)) - a.dot(b));
    };
    double cur = value(x, y);
    double step = 0.3;
    for (int it = 0; it < 16; ++it) {
      Eigen::VectorXd cx = x;
      Eigen::VectorXd cy = y;
      (rng.uniform() < 0.5 ? cx : cy) += step * rng.gaussian_vector(n);
      if (cx.norm() > 1.0) cx /= cx.norm();
      if (cy.norm() > 1.0) cy /= cy.norm();
      const double cv = value(cx, cy);
      if (cv > cur) {
        cur = cv;
        x = cx;
        y = cy;
      } else {
        step *= 0.8;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

StabilityInstance verify_instance(Route route, int d, double eta, std::uint64_t seed,
                                  const InstanceBudgets& budgets, double delta_floor) {
  StabilityInstance inst;
  inst.route = route;
  inst.d = d;
  inst.eta = eta;
  inst.seed = seed;

  const Rng root = Rng(seed).child(0x494e5354ULL);
  Rng urng = root.child(1);
  inst.unitary = haar_unitary(d, urng);

  const long long cap = caratheodory_cap(2LL * d * d);
  const double sqrt2 = std::sqrt(2.0);
  const double check_tol = tols().envelope_bracket;  // 1e-6 additive slack

  if (route == Route::Wigner) {
    auto f = std::make_shared<AlmostSymmetry>(
        perturbed_symmetry(inst.unitary, eta, root.child(2).next_u64()));
    inst.projective_map = f;
    inst.epsilon_certificate = *f->epsilon_certificate;
    inst.epsilon_lower = epsilon_estimate(*f, budgets.eps_pairs, root.child(3).next_u64());

    auto big_f = std::make_shared<HomogeneousMap>(extend_projective(*f));
    inst.extension = big_f;
    const double delta_cert = 2.0 * std::sqrt(inst.epsilon_certificate);
    inst.delta_used = std::max(delta_cert, delta_floor);
    inst.delta_floored = delta_cert < delta_floor;
    inst.twisted = std::make_shared<TwistedSumSpace>(big_f->codomain, big_f->domain, *big_f,
                                                     inst.delta_used);
    inst.delta_lower = delta_estimate(*big_f, budgets.delta_families, budgets.delta_family_size,
                                      root.child(4).next_u64());

    // Z = S_2 (+)_F S_1 and its dual S_inf (+) S_2.
    TypeStepSpec z_step{1.0, std::sqrt(static_cast<double>(d)), 0.0, "S2+S1"};
    inst.t2z_chain = type2_twisted_bound(sqrt2, z_step, cap);
    if (d >= 2) {
      TypeStepSpec dual_step{std::sqrt(4.0 * std::log2(static_cast<double>(d))), 1.0, 0.0,
                             "Sinf+S2"};
      inst.t2z_dual_chain = type2_twisted_bound(sqrt2, dual_step, cap);
      inst.t2z_dual_chain_printed = sinf_route_type_bound(d);
      inst.thm1_rhs_value =
          theorem1_rhs(inst.delta_used, inst.t2z_chain.value, std::sqrt(std::exp(1.0)),
                       inst.t2z_dual_chain.value, std::sqrt(static_cast<double>(d)));
    } else {
      inst.thm1_rhs_value = theorem1_rhs(inst.delta_used, inst.t2z_chain.value,
                                         std::sqrt(std::exp(1.0)), std::nullopt, std::nullopt);
    }

    const auto fit = best_linear_map(*big_f, budgets.minimax_samples, 1e-6,
                                     root.child(5).next_u64());
    inst.h_matrix = fit.matrix;
    inst.lhs_sphere = std::max(fit.residual, approx_error(*big_f, fit.matrix,
                                                          budgets.approx_samples,
                                                          root.child(6).next_u64(), false));
    inst.lhs_projective = approx_error(*big_f, fit.matrix, budgets.approx_samples,
                                       root.child(7).next_u64(), true);

    inst.pass_delta = inst.delta_lower <= delta_cert + check_tol;
    inst.pass_thm1 = inst.lhs_sphere <= inst.thm1_rhs_value * (1.0 + 1e-9) + 1e-9;
    if (inst.epsilon_certificate > 0.0 && d >= 2) {
      inst.route_bound = wigner_bound(d, inst.epsilon_certificate);
      inst.pass_route_bound = inst.lhs_projective <= inst.route_bound + check_tol;
    } else {
      // Exact symmetry: the extension is linear and the fit must nail it.
      inst.route_bound = 0.0;
      inst.pass_route_bound = inst.lhs_projective <= 1e-6;
    }
    inst.pass_chain = true;
  } else {
    auto f = std::make_shared<BallMap>(
        perturbed_global_symmetry(inst.unitary, eta, root.child(2).next_u64()));
    inst.ball_map = f;
    inst.epsilon_certificate = *f->epsilon_certificate;
    inst.epsilon_lower =
        global_epsilon_estimate(*f, budgets.eps_pairs, root.child(3).next_u64());

    auto big_f = std::make_shared<HomogeneousMap>(extend_global(*f));
    inst.extension = big_f;
    const double delta_cert = 4.0 * std::sqrt(inst.epsilon_certificate);
    inst.delta_used = std::max(delta_cert, delta_floor);
    inst.delta_floored = delta_cert < delta_floor;
    inst.twisted = std::make_shared<TwistedSumSpace>(big_f->codomain, big_f->domain, *big_f,
                                                     inst.delta_used);
    inst.delta_lower = delta_estimate(*big_f, budgets.delta_families, budgets.delta_family_size,
                                      root.child(4).next_u64());

    // Z = S_2 (+)_F S_2; the dual is a twisted sum of the same two spaces.
    TypeStepSpec z_step{1.0, 1.0, 0.0, "S2+S2"};
    inst.t2z_chain = type2_twisted_bound(sqrt2, z_step, cap);
    inst.t2z_dual_chain = inst.t2z_chain;
    inst.t2z_dual_chain_printed = hilbert_route_type_bound(d);
    inst.thm1_rhs_value = theorem1_rhs(inst.delta_used, inst.t2z_chain.value, 1.0,
                                       inst.t2z_dual_chain.value, 1.0);

    const auto fit = best_linear_map(*big_f, budgets.minimax_samples, 1e-6,
                                     root.child(5).next_u64());
    inst.h_matrix = fit.matrix;
    inst.lhs_sphere = std::max(fit.residual, approx_error(*big_f, fit.matrix,
                                                          budgets.approx_samples,
                                                          root.child(6).next_u64(), false));
    inst.lhs_projective = inst.lhs_sphere;

    inst.eq12_ratio = delta_estimate(*big_f, budgets.chain_samples / 4, 5,
                                     root.child(8).next_u64());
    inst.eq13_ratio = wquasi_residual(*big_f, budgets.chain_samples, root.child(9).next_u64());
    inst.eq14_gap = ball_extension_gap(*f, *big_f, budgets.chain_samples,
                                       root.child(10).next_u64());

    const double se = std::sqrt(inst.epsilon_certificate);
    inst.pass_delta = inst.delta_lower <= delta_cert + check_tol;
    inst.pass_chain = inst.eq12_ratio <= 4.0 * se + check_tol &&
                      inst.eq13_ratio <= 4.0 * inst.epsilon_certificate + check_tol &&
                      inst.eq14_gap <= 3.0 * se + check_tol;
    inst.pass_thm1 = inst.lhs_sphere <= inst.thm1_rhs_value * (1.0 + 1e-9) + 1e-9;
    if (inst.epsilon_certificate > 0.0) {
      inst.route_bound = global_bound(d, inst.epsilon_certificate);
      inst.pass_route_bound = inst.lhs_sphere <= inst.route_bound + check_tol;
    } else {
      inst.route_bound = 0.0;
      inst.pass_route_bound = inst.lhs_sphere <= 1e-6;
    }
  }

  inst.pass = inst.pass_delta && inst.pass_thm1 && inst.pass_route_bound && inst.pass_chain;
  if (!inst.pass) {
    inst.failure = std::string("failed:") + (inst.pass_delta ? "" : " delta-certificate") +
                   (inst.pass_thm1 ? "" : " theorem1") +
                   (inst.pass_route_bound ? "" : " route-bound") +
                   (inst.pass_chain ? "" : " extension-chain");
  }
  return inst;
}

}  // namespace banachlab
