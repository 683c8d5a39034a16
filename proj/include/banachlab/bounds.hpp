#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace banachlab {

// One application of the twisted-sum type inequality
//   T_{2,n^2}(Z) <= tY T_{2,n}(Z) + tY tX + T_{2,n}(Z) tX.
double ts_type_step(double tY, double tX, double tZn);

// Families longer than D(D+1)/2 cannot increase T_{2,n} or C_{2,n} of a
// D-dimensional space (cone Caratheodory).
long long caratheodory_cap(long long space_dim);

// Step description for the doubling-exponent recursion on the grid
// n = 2^(2^k). Either the component bounds (tY, tX) are applied exactly, or
// a simplified multiplicative factor replaces the whole step.
struct TypeStepSpec {
  double tY = 1.0;
  double tX = 1.0;
  double multiplier = 0.0;  // > 0 selects the multiplicative mode
  std::string name = "components";
};

struct TraceStep {
  long long n = 0;  // family size after the step
  double t = 0.0;   // bound after the step
};

struct BoundReport {
  std::string name;
  double base = 0.0;
  double value = 0.0;          // iterated bound at the first grid point >= target
  long long target_n = 0;
  long long reached_n = 0;
  int steps = 0;
  TypeStepSpec step;
  std::vector<TraceStep> trace;     // starts at (2, base)
  double grid_closed_form = 0.0;    // closed form of the recursion at reached_n
  double paper_final_form = 0.0;    // displayed end-of-chain value, when the route has one
};

// Iterate ts_type_step on the grid n = 2^(2^k), starting from T_{2,2} <=
// base, until n >= target_n; no interpolation between grid points.
BoundReport type2_twisted_bound(double base, const TypeStepSpec& step, long long target_n);

// Re-run the recursion recorded in the report; the result must reproduce
// `value` to 1e-12 relative.
double replay_trace(const BoundReport& report);

// The two proof chains. Defaults follow the printed instantiations
// (n = 4d^2 for the Hilbert route, n = 2d^4 for the S_inf route); pass the
// Caratheodory-consistent target to get the corrected chain.
BoundReport hilbert_route_type_bound(int d, long long target_n = 0);
BoundReport sinf_route_type_bound(int d, long long target_n = 0);

// 2 delta min{ T2(Z) C2(X), 1 + T2(Z*) C2(Y*) }; a branch with missing
// inputs is skipped, both missing is an error.
double theorem1_rhs(double delta, std::optional<double> t2z, std::optional<double> c2x,
                    std::optional<double> t2z_dual, std::optional<double> c2y_dual);

// Final closed form of the projective stability chain:
//   4 (8 log2 d)^(2 + log2 log2 (2d) / 2) sqrt(d epsilon),  d >= 2.
double wigner_bound(int d, double epsilon);

// Final closed form of the global stability chain: 79 sqrt(eps) (1 + log2 d).
double global_bound(int d, double epsilon);

}  // namespace banachlab
