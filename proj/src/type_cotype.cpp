#include "banachlab/type_cotype.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "banachlab/rng.hpp"

namespace banachlab {

namespace {

constexpr int kExactCutoff = 14;  // 16384 sign patterns

void check_family(const NormedSpace& space, const std::vector<Eigen::VectorXd>& family) {
  if (family.empty()) throw std::invalid_argument("family must be nonempty");
  for (const auto& x : family)
    if (static_cast<int>(x.size()) != space.dim())
      throw std::invalid_argument("family element dimension mismatch");
}

double family_norm_sq(const NormedSpace& space, const std::vector<Eigen::VectorXd>& family) {
  double s = 0.0;
  for (const auto& x : family) {
    const double n = space.norm(x);
    s += n * n;
  }
  return s;
}

}  // namespace

MomentEstimate ensemble_second_moment(const NormedSpace& space,
                                      const std::vector<Eigen::VectorXd>& family,
                                      const SignEnsemble& ensemble) {
  check_family(space, family);
  const int n = static_cast<int>(family.size());
  MomentEstimate out;
  if (ensemble.kind == SignEnsemble::Kind::Rademacher && ensemble.exact) {
    if (n > kExactCutoff)
      throw std::invalid_argument("exact Rademacher enumeration is limited to n <= 14");
    // Gray-code walk over the 2^{n-1} sign patterns with the first sign
    // pinned to +1 (global sign symmetry halves the work).
    const long count = 1L << (n - 1);
    Eigen::VectorXd sum = family[0];
    for (int j = 1; j < n; ++j) sum += family[j];
    std::vector<int> sign(n, 1);
    double acc = 0.0;
    double nm = space.norm(sum);
    acc += nm * nm;
    for (long g = 1; g < count; ++g) {
      // Lowest set bit of g tells which of the free signs flips; free signs
      // occupy indices 1..n-1.
      const int bit = static_cast<int>(__builtin_ctzl(g)) + 1;
      sign[bit] = -sign[bit];
      sum += (2.0 * sign[bit]) * family[bit];
      nm = space.norm(sum);
      acc += nm * nm;
    }
    out.value = std::sqrt(acc / static_cast<double>(count));
    out.standard_error = 0.0;
    out.samples = count;
    out.exact = true;
    return out;
  }

  const int samples = std::max(2, ensemble.mc_samples);
  Rng rng = Rng(ensemble.seed).child(0x4d4f4d32ULL);
  double mean = 0.0;
  double m2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(space.dim());
    for (int j = 0; j < n; ++j) {
      const double coeff = ensemble.kind == SignEnsemble::Kind::Gaussian
                               ? rng.gaussian()
                               : (rng.uniform() < 0.5 ? -1.0 : 1.0);
      sum += coeff * family[j];
    }
    const double nm = space.norm(sum);
    const double v = nm * nm;
    const double delta = v - mean;
    mean += delta / (s + 1);
    m2 += delta * (v - mean);
  }
  const double var_mean = m2 / (samples - 1.0) / samples;
  out.value = std::sqrt(mean);
  // Delta method for the square root of the estimated mean.
  out.standard_error = out.value > 0 ? std::sqrt(var_mean) / (2.0 * out.value) : std::sqrt(var_mean);
  out.samples = samples;
  out.exact = false;
  return out;
}

RatioEstimate type2_ratio(const NormedSpace& space, const std::vector<Eigen::VectorXd>& family,
                          const SignEnsemble& ensemble) {
  const double den = std::sqrt(family_norm_sq(space, family));
  if (den == 0.0) throw std::invalid_argument("type2_ratio needs a family that is not all zero");
  RatioEstimate r;
  r.moment = ensemble_second_moment(space, family, ensemble);
  r.value = r.moment.value / den;
  r.standard_error = r.moment.standard_error / den;
  return r;
}

RatioEstimate cotype2_ratio(const NormedSpace& space, const std::vector<Eigen::VectorXd>& family,
                            const SignEnsemble& ensemble) {
  const double num = std::sqrt(family_norm_sq(space, family));
  if (num == 0.0) throw std::invalid_argument("cotype2_ratio needs a family that is not all zero");
  RatioEstimate r;
  r.moment = ensemble_second_moment(space, family, ensemble);
  if (r.moment.value <= 0.0)
    throw std::invalid_argument("cotype2_ratio: the ensemble second moment vanished");
  r.value = num / r.moment.value;
  r.standard_error = num * r.moment.standard_error / (r.moment.value * r.moment.value);
  return r;
}

namespace {

TypeEstimate estimate_impl(const NormedSpace& space, int n, const OptimizationBudget& budget,
                           std::uint64_t seed, const SignEnsemble& ensemble,
                           TypeEstimate::Kind kind,
                           const std::vector<Eigen::VectorXd>* warm_start) {
  if (n < 1) throw std::invalid_argument("family size must be >= 1");
  const Rng root = Rng(seed).child(kind == TypeEstimate::Kind::Type2 ? 0x54595032ULL : 0x434f5432ULL);
  auto objective = [&](const std::vector<Eigen::VectorXd>& fam) {
    const auto r = kind == TypeEstimate::Kind::Type2 ? type2_ratio(space, fam, ensemble)
                                                     : cotype2_ratio(space, fam, ensemble);
    return r;
  };

  std::vector<Eigen::VectorXd> best_family;
  double best = -1.0;

  // Deterministic starts: the canonical coordinate family (the classical
  // witness for l1/linf-type behaviour) and, when provided, the previous
  // witness padded with zeros; the remaining restarts are random.
  std::vector<std::vector<Eigen::VectorXd>> fixed_starts;
  {
    std::vector<Eigen::VectorXd> canonical(n);
    for (int j = 0; j < n; ++j) {
      canonical[j] = Eigen::VectorXd::Zero(space.dim());
      canonical[j][j % space.dim()] = 1.0;
    }
    fixed_starts.push_back(std::move(canonical));
    if (warm_start) {
      std::vector<Eigen::VectorXd> padded = *warm_start;
      padded.resize(n, Eigen::VectorXd::Zero(space.dim()));
      fixed_starts.push_back(std::move(padded));
    }
  }

  const int total = budget.restarts + static_cast<int>(fixed_starts.size());
  for (int run = 0; run < total; ++run) {
    Rng rng = root.child(static_cast<std::uint64_t>(run));
    std::vector<Eigen::VectorXd> fam(n);
    if (run < static_cast<int>(fixed_starts.size())) {
      fam = fixed_starts[run];
    } else {
      for (int j = 0; j < n; ++j) fam[j] = space.sample_unit(rng);
    }
    double cur = objective(fam).value;
    double step = 0.5;
    int stall = 0;
    for (int it = 0; it < budget.steps; ++it) {
      std::vector<Eigen::VectorXd> cand = fam;
      const int j = rng.uniform_int(0, n - 1);
      const double move = rng.uniform();
      if (move < 0.5) {
        cand[j] += step * rng.gaussian_vector(space.dim());
      } else if (move < 0.8) {
        cand[j][rng.uniform_int(0, space.dim() - 1)] += step * rng.gaussian();
      } else {
        cand[j] *= std::exp(0.5 * step * rng.gaussian());
      }
      bool all_zero = true;
      for (const auto& x : cand)
        if (x.norm() > 0) {
          all_zero = false;
          break;
        }
      if (all_zero) continue;
      const double cv = objective(cand).value;
      if (cv > cur) {
        cur = cv;
        fam = std::move(cand);
        stall = 0;
      } else if (++stall % 20 == 0) {
        step *= 0.7;
      }
    }
    if (cur > best) {
      best = cur;
      best_family = fam;
    }
  }

  const auto final_ratio = objective(best_family);
  TypeEstimate e;
  e.kind = kind;
  e.n = n;
  e.value = final_ratio.value;
  e.standard_error = final_ratio.standard_error;
  e.witness = std::move(best_family);
  e.ensemble = ensemble;
  return e;
}

std::vector<TypeEstimate> curve_impl(const NormedSpace& space, int n_max,
                                     const OptimizationBudget& budget, std::uint64_t seed,
                                     const SignEnsemble& ensemble, TypeEstimate::Kind kind) {
  std::vector<TypeEstimate> curve;
  curve.reserve(n_max);
  const std::vector<Eigen::VectorXd>* warm = nullptr;
  for (int n = 1; n <= n_max; ++n) {
    TypeEstimate e = estimate_impl(space, n, budget, Rng(seed).child(n).next_u64(), ensemble, kind,
                                   warm);
    // Padding a witness with zeros never changes its ratio, so carrying the
    // best value forward keeps the curve honest and nondecreasing.
    if (!curve.empty() && curve.back().value > e.value) {
      e.value = curve.back().value;
      e.standard_error = curve.back().standard_error;
      e.witness = curve.back().witness;
      e.witness.resize(n, Eigen::VectorXd::Zero(space.dim()));
    }
    curve.push_back(std::move(e));
    warm = &curve.back().witness;
  }
  return curve;
}

}  // namespace

TypeEstimate estimate_type2(const NormedSpace& space, int n, const OptimizationBudget& budget,
                            std::uint64_t seed, const SignEnsemble& ensemble) {
  return estimate_impl(space, n, budget, seed, ensemble, TypeEstimate::Kind::Type2, nullptr);
}

TypeEstimate estimate_cotype2(const NormedSpace& space, int n, const OptimizationBudget& budget,
                              std::uint64_t seed, const SignEnsemble& ensemble) {
  return estimate_impl(space, n, budget, seed, ensemble, TypeEstimate::Kind::Cotype2, nullptr);
}

std::vector<TypeEstimate> estimate_type2_curve(const NormedSpace& space, int n_max,
                                               const OptimizationBudget& budget, std::uint64_t seed,
                                               const SignEnsemble& ensemble) {
  return curve_impl(space, n_max, budget, seed, ensemble, TypeEstimate::Kind::Type2);
}

std::vector<TypeEstimate> estimate_cotype2_curve(const NormedSpace& space, int n_max,
                                                 const OptimizationBudget& budget,
                                                 std::uint64_t seed, const SignEnsemble& ensemble) {
  return curve_impl(space, n_max, budget, seed, ensemble, TypeEstimate::Kind::Cotype2);
}

double gaussian_conversion_factor() { return std::sqrt(std::acos(-1.0) / 2.0); }

Table1Bound table1_upper(SpaceClass cls, int d, ConstantKind kind, double p_or_q, bool gaussian) {
  if (d < 1) throw std::invalid_argument("table1_upper needs d >= 1");
  if (kind == ConstantKind::Type && (p_or_q < 1.0 || p_or_q > 2.0))
    throw std::invalid_argument("type exponent must lie in [1, 2]");
  if (kind == ConstantKind::Cotype && p_or_q < 2.0)
    throw std::invalid_argument("cotype exponent must lie in [2, inf)");
  const double type_exp = 1.0 - 1.0 / p_or_q;
  const double dd = static_cast<double>(d);
  Table1Bound b;
  switch (cls) {
    case SpaceClass::L1:
      b.value = kind == ConstantKind::Type ? std::pow(dd, type_exp) : std::sqrt(2.0);
      break;
    case SpaceClass::Hilbert:
      b.value = 1.0;
      break;
    case SpaceClass::Linf:
      if (kind == ConstantKind::Type) {
        b.value = std::pow(std::log2(dd), type_exp);  // printed without a constant
        b.asymptotic = true;
      } else {
        b.value = std::pow(dd, 1.0 / p_or_q);
      }
      break;
    case SpaceClass::S1:
      b.value = kind == ConstantKind::Type ? std::pow(dd, type_exp) : std::sqrt(std::exp(1.0));
      break;
    case SpaceClass::Sinf:
      b.value = kind == ConstantKind::Type ? std::pow(4.0 * std::log2(dd), type_exp)
                                           : std::pow(dd, 1.0 / p_or_q);
      break;
  }
  if (gaussian) {
    b.value *= gaussian_conversion_factor();
    b.gaussian = true;
  }
  return b;
}

double consistency_cap(SpaceClass cls, int d, ConstantKind kind, double p_or_q, bool gaussian) {
  SpaceClass effective = cls;
  if (cls == SpaceClass::Linf && kind == ConstantKind::Type) effective = SpaceClass::Sinf;
  const double v = table1_upper(effective, d, kind, p_or_q, gaussian).value;
  return std::max(1.0, v);  // type and cotype constants are never below one
}

SpaceClass classify_space(const NormedSpace& space) {
  if (space.kind() == SpaceKind::Twisted)
    throw std::invalid_argument("twisted spaces have no Table-1 row");
  const double r = space.exponent();
  if (r == 2.0) return SpaceClass::Hilbert;
  if (space.kind() == SpaceKind::Lp) {
    if (r == 1.0) return SpaceClass::L1;
    if (r == kInf) return SpaceClass::Linf;
  } else {
    if (r == 1.0) return SpaceClass::S1;
    if (r == kInf) return SpaceClass::Sinf;
  }
  throw std::invalid_argument("no Table-1 row for exponent r = " + std::to_string(r));
}

}  // namespace banachlab
