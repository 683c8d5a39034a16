#include "banachlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace banachlab {

double ts_type_step(double tY, double tX, double tZn) {
  if (tY < 1.0 || tX < 1.0 || tZn < 1.0)
    throw std::invalid_argument("type constants are >= 1; rejecting smaller step inputs");
  return tY * tZn + tY * tX + tZn * tX;
}

long long caratheodory_cap(long long space_dim) {
  if (space_dim < 1) throw std::invalid_argument("caratheodory_cap needs dimension >= 1");
  return space_dim * (space_dim + 1) / 2;
}

BoundReport type2_twisted_bound(double base, const TypeStepSpec& step, long long target_n) {
  if (base < 1.0) throw std::invalid_argument("base type bound must be >= 1");
  if (target_n < 2) throw std::invalid_argument("target family size must be >= 2");
  const bool multiplicative = step.multiplier > 0.0;
  if (!multiplicative && (step.tY < 1.0 || step.tX < 1.0))
    throw std::invalid_argument("component type bounds must be >= 1");

  BoundReport r;
  r.name = step.name;
  r.base = base;
  r.target_n = target_n;
  r.step = step;
  double t = base;
  long long n = 2;
  r.trace.push_back({n, t});
  int k = 0;
  while (n < target_n) {
    t = multiplicative ? step.multiplier * t : ts_type_step(step.tY, step.tX, t);
    if (n > 3037000499LL) {  // n*n would overflow 63 bits
      n = target_n;
    } else {
      n = n * n;
    }
    ++k;
    r.trace.push_back({n, t});
  }
  r.value = t;
  r.reached_n = n;
  r.steps = k;
  if (multiplicative) {
    r.grid_closed_form = base * std::pow(step.multiplier, k);
  } else {
    // a_{k+1} = q a_k + c with q = tY + tX, c = tY tX has the closed form
    // a_k = (a_0 + c/(q-1)) q^k - c/(q-1).
    const double q = step.tY + step.tX;
    const double c = step.tY * step.tX / (q - 1.0);
    r.grid_closed_form = (base + c) * std::pow(q, k) - c;
  }
  return r;
}

double replay_trace(const BoundReport& report) {
  double t = report.base;
  for (int i = 1; i < static_cast<int>(report.trace.size()); ++i) {
    t = report.step.multiplier > 0.0 ? report.step.multiplier * t
                                     : ts_type_step(report.step.tY, report.step.tX, t);
  }
  return t;
}

BoundReport hilbert_route_type_bound(int d, long long target_n) {
  if (d < 1) throw std::invalid_argument("hilbert route needs d >= 1");
  if (target_n == 0) target_n = 4LL * d * d;
  TypeStepSpec step;
  step.tY = 1.0;
  step.tX = 1.0;
  step.name = "hilbert-route";
  BoundReport r = type2_twisted_bound(std::sqrt(2.0), step, target_n);
  // Displayed chain end: T_{2,n}(Z) <= 2 (1 + sqrt 2) log2 n at n = 4 d^2,
  // which is 4 (1 + sqrt 2) log2 (2 d).
  r.paper_final_form = 2.0 * (1.0 + std::sqrt(2.0)) * std::log2(static_cast<double>(target_n));
  return r;
}

BoundReport sinf_route_type_bound(int d, long long target_n) {
  if (d < 2) throw std::invalid_argument("sinf route needs d >= 2 (log2 d must be positive)");
  if (target_n == 0) target_n = 2LL * d * d * d * d;
  const double L = std::log2(static_cast<double>(d));
  TypeStepSpec step;
  step.multiplier = 2.0 * std::sqrt(8.0 * L);
  step.name = "sinf-route";
  BoundReport r = type2_twisted_bound(std::sqrt(2.0), step, target_n);
  r.paper_final_form =
      2.0 * std::pow(8.0 * L, 2.0 + 0.5 * std::log2(std::log2(2.0 * static_cast<double>(d))));
  return r;
}

double theorem1_rhs(double delta, std::optional<double> t2z, std::optional<double> c2x,
                    std::optional<double> t2z_dual, std::optional<double> c2y_dual) {
  if (!(delta > 0.0)) throw std::invalid_argument("theorem1_rhs needs delta > 0");
  std::optional<double> primal, dual;
  if (t2z && c2x) {
    if (*t2z < 1.0 || *c2x < 1.0) throw std::invalid_argument("type/cotype constants are >= 1");
    primal = *t2z * *c2x;
  }
  if (t2z_dual && c2y_dual) {
    if (*t2z_dual < 1.0 || *c2y_dual < 1.0)
      throw std::invalid_argument("type/cotype constants are >= 1");
    dual = 1.0 + *t2z_dual * *c2y_dual;
  }
  if (!primal && !dual)
    throw std::invalid_argument("theorem1_rhs needs at least one complete branch");
  double m;
  if (primal && dual)
    m = std::min(*primal, *dual);
  else
    m = primal ? *primal : *dual;
  return 2.0 * delta * m;
}

double wigner_bound(int d, double epsilon) {
  if (d < 2) throw std::invalid_argument("wigner_bound needs d >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("wigner_bound needs epsilon > 0");
  const double L = std::log2(static_cast<double>(d));
  const double beta = 2.0 + 0.5 * std::log2(std::log2(2.0 * static_cast<double>(d)));
  return 4.0 * std::pow(8.0 * L, beta) * std::sqrt(d * epsilon);
}

double global_bound(int d, double epsilon) {
  if (d < 1) throw std::invalid_argument("global_bound needs d >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("global_bound needs epsilon > 0");
  return 79.0 * std::sqrt(epsilon) * (1.0 + std::log2(static_cast<double>(d)));
}

}  // namespace banachlab
