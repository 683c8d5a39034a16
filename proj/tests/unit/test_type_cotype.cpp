#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "banachlab/type_cotype.hpp"

using namespace banachlab;

namespace {

std::vector<Eigen::VectorXd> basis_family(int d, int n) {
  std::vector<Eigen::VectorXd> fam;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[j % d] = 1.0;
    fam.push_back(e);
  }
  return fam;
}

}  // namespace

TEST_CASE("exact Rademacher second moments on basis pairs") {
  const auto fam = basis_family(2, 2);
  const auto ex = SignEnsemble::rademacher_exact();
  CHECK(ensemble_second_moment(NormedSpace::lp(2, 2.0), fam, ex).value ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(ensemble_second_moment(NormedSpace::lp(2, 1.0), fam, ex).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(ensemble_second_moment(NormedSpace::lp(2, kInf), fam, ex).value ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ensemble_second_moment(NormedSpace::lp(2, 2.0), fam, ex).exact);
}

TEST_CASE("exact enumeration rejects large families") {
  const auto fam = basis_family(2, 15);
  CHECK_THROWS_AS(
      (void)ensemble_second_moment(NormedSpace::lp(2, 2.0), fam, SignEnsemble::rademacher_exact()),
      std::invalid_argument);
}

TEST_CASE("type and cotype ratios on hand families") {
  const auto fam = basis_family(2, 2);
  const auto ex = SignEnsemble::rademacher_exact();
  CHECK(type2_ratio(NormedSpace::lp(2, 1.0), fam, ex).value ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(type2_ratio(NormedSpace::lp(2, kInf), fam, ex).value ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(cotype2_ratio(NormedSpace::lp(2, kInf), fam, ex).value ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(cotype2_ratio(NormedSpace::lp(2, 1.0), fam, ex).value ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
  CHECK(cotype2_ratio(NormedSpace::lp(2, 1.0), fam, ex).value <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("Hilbert space ratios are exactly one under Rademacher signs") {
  Rng rng(3);
  const auto ex = SignEnsemble::rademacher_exact();
  for (const auto& space : {NormedSpace::lp(4, 2.0), NormedSpace::schatten(2, 2.0)}) {
    for (int t = 0; t < 25; ++t) {
      std::vector<Eigen::VectorXd> fam;
      const int n = 1 + t % 5;
      for (int j = 0; j < n; ++j) fam.push_back(rng.gaussian_vector(space.dim()));
      CHECK(type2_ratio(space, fam, ex).value == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(cotype2_ratio(space, fam, ex).value == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("ratios reject degenerate families") {
  const std::vector<Eigen::VectorXd> zeros(2, Eigen::VectorXd::Zero(2));
  CHECK_THROWS_AS((void)type2_ratio(NormedSpace::lp(2, 2.0), zeros,
                                    SignEnsemble::rademacher_exact()),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)cotype2_ratio(NormedSpace::lp(2, 2.0), zeros,
                                      SignEnsemble::rademacher_exact()),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with exact enumeration within 3 standard errors") {
  Rng rng(5);
  const auto space = NormedSpace::lp(3, 1.0);
  int failures = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<Eigen::VectorXd> fam;
    const int n = 2 + t % 4;
    for (int j = 0; j < n; ++j) fam.push_back(rng.gaussian_vector(space.dim()));
    const double exact =
        ensemble_second_moment(space, fam, SignEnsemble::rademacher_exact()).value;
    const auto mc =
        ensemble_second_moment(space, fam, SignEnsemble::rademacher_mc(6000, 100 + t));
    if (std::abs(mc.value - exact) > 3.0 * mc.standard_error + 1e-12) ++failures;
  }
  // 3 sigma misses happen at ~0.3% per trial; none-or-one out of 50 is the
  // expected regime.
  CHECK(failures <= 1);
}

TEST_CASE("estimate_type2 on benchmark spaces") {
  const OptimizationBudget budget{3, 200};
  const auto hilbert = estimate_type2(NormedSpace::lp(4, 2.0), 4, budget, 1);
  CHECK(hilbert.value >= 0.98);
  CHECK(hilbert.value <= 1.02);

  const auto l1 = estimate_type2(NormedSpace::lp(2, 1.0), 2, budget, 2);
  CHECK(l1.value >= std::sqrt(2.0) - 0.01);

  // n = 1 under Rademacher signs: the ratio is identically one.
  const auto single = estimate_type2(NormedSpace::lp(3, 1.0), 1, budget, 3);
  CHECK(single.value == doctest::Approx(1.0).epsilon(1e-12));

  // Witness re-evaluates to the reported value.
  const auto again = type2_ratio(NormedSpace::lp(2, 1.0), l1.witness, l1.ensemble);
  CHECK(again.value == doctest::Approx(l1.value).epsilon(1e-12));
}

TEST_CASE("estimate_cotype2 on benchmark spaces") {
  const OptimizationBudget budget{3, 200};
  const auto hilbert = estimate_cotype2(NormedSpace::schatten(2, 2.0), 3, budget, 1);
  CHECK(hilbert.value >= 0.98);
  CHECK(hilbert.value <= 1.02);

  const auto linf = estimate_cotype2(NormedSpace::lp(4, kInf), 4, budget, 2);
  CHECK(linf.value >= 1.9);  // witness {e_j} reaches sqrt(4) = 2

  const auto l1 = estimate_cotype2(NormedSpace::lp(2, 1.0), 2, budget, 3);
  CHECK(l1.value <= std::sqrt(2.0) + 0.01);
}

TEST_CASE("table 1 closed forms") {
  CHECK(table1_upper(SpaceClass::S1, 4, ConstantKind::Type, 2.0).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(table1_upper(SpaceClass::Sinf, 2, ConstantKind::Type, 2.0).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(table1_upper(SpaceClass::S1, 7, ConstantKind::Cotype, 2.0).value ==
        doctest::Approx(1.6487212707001282).epsilon(1e-12));
  CHECK(table1_upper(SpaceClass::L1, 2, ConstantKind::Cotype, 2.0).value ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(table1_upper(SpaceClass::Hilbert, 5, ConstantKind::Type, 1.5).value == 1.0);
  CHECK(table1_upper(SpaceClass::Linf, 4, ConstantKind::Cotype, 2.0).value ==
        doctest::Approx(2.0));
  CHECK(table1_upper(SpaceClass::Linf, 4, ConstantKind::Type, 2.0).asymptotic);
  CHECK_FALSE(table1_upper(SpaceClass::Sinf, 4, ConstantKind::Type, 2.0).asymptotic);
  CHECK_THROWS_AS((void)table1_upper(SpaceClass::L1, 2, ConstantKind::Type, 2.5),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)table1_upper(SpaceClass::L1, 2, ConstantKind::Cotype, 1.5),
                  std::invalid_argument);

  // Gaussian conversion is the recorded factor, applied multiplicatively.
  const double factor = gaussian_conversion_factor();
  CHECK(factor == doctest::Approx(std::sqrt(std::acos(-1.0) / 2.0)));
  CHECK(table1_upper(SpaceClass::S1, 4, ConstantKind::Type, 2.0, true).value ==
        doctest::Approx(2.0 * factor));
}

TEST_CASE("consistency caps dominate achievable ratios") {
  // The printed l_inf type entry has no constant; at d = 2 the witness
  // {(1,1),(1,-1)} reaches sqrt(2), above (log2 2)^{1/2} = 1. The cap used
  // for checks is the S_inf form, which the diagonal embedding justifies.
  std::vector<Eigen::VectorXd> fam;
  Eigen::VectorXd a(2), b(2);
  a << 1, 1;
  b << 1, -1;
  fam = {a, b};
  const auto ratio = type2_ratio(NormedSpace::lp(2, kInf), fam, SignEnsemble::rademacher_exact());
  CHECK(ratio.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(ratio.value > table1_upper(SpaceClass::Linf, 2, ConstantKind::Type, 2.0).value);
  CHECK(ratio.value <= consistency_cap(SpaceClass::Linf, 2, ConstantKind::Type, 2.0) + 1e-12);
}

TEST_CASE("estimate curves are nondecreasing in n") {
  const OptimizationBudget budget{2, 80};
  for (const auto& space : {NormedSpace::lp(3, 1.0), NormedSpace::lp(3, kInf)}) {
    const auto curve_t = estimate_type2_curve(space, 6, budget, 11);
    const auto curve_c = estimate_cotype2_curve(space, 6, budget, 13);
    for (std::size_t i = 1; i < curve_t.size(); ++i) {
      CHECK(curve_t[i].value >= curve_t[i - 1].value - 1e-12);
      CHECK(curve_c[i].value >= curve_c[i - 1].value - 1e-12);
    }
  }
}

TEST_CASE("gaussian and rademacher ratios respect converted caps") {
  Rng rng(29);
  const struct {
    NormedSpace space;
    SpaceClass cls;
    int d;
  } grid[] = {{NormedSpace::lp(3, 1.0), SpaceClass::L1, 3},
              {NormedSpace::lp(3, kInf), SpaceClass::Linf, 3},
              {NormedSpace::schatten(2, 1.0), SpaceClass::S1, 2}};
  for (const auto& g : grid) {
    for (int t = 0; t < 10; ++t) {
      std::vector<Eigen::VectorXd> fam;
      for (int j = 0; j < 3; ++j) fam.push_back(rng.gaussian_vector(g.space.dim()));
      const auto rad = type2_ratio(g.space, fam, SignEnsemble::rademacher_exact());
      const auto gau = type2_ratio(g.space, fam, SignEnsemble::gaussian(8000, 17 + t));
      CHECK(rad.value <= consistency_cap(g.cls, g.d, ConstantKind::Type, 2.0) + 1e-9);
      CHECK(gau.value <= consistency_cap(g.cls, g.d, ConstantKind::Type, 2.0, true) +
                             3.0 * gau.standard_error + 1e-9);
      // Bounded discrepancy between the two ensembles on one witness: the
      // Rademacher average is below sqrt(pi/2) times the Gaussian one, and
      // at n = 3 the converse holds up to a small absolute factor.
      CHECK(gau.value <= 2.0 * rad.value + 3.0 * gau.standard_error + 1e-9);
      CHECK(rad.value <= std::sqrt(std::acos(-1.0) / 2.0) *
                                 (gau.value + 3.0 * gau.standard_error) +
                             1e-9);
    }
  }
}

TEST_CASE("classify_space maps exponents to table rows") {
  CHECK(classify_space(NormedSpace::lp(3, 1.0)) == SpaceClass::L1);
  CHECK(classify_space(NormedSpace::lp(3, 2.0)) == SpaceClass::Hilbert);
  CHECK(classify_space(NormedSpace::schatten(3, kInf)) == SpaceClass::Sinf);
  CHECK_THROWS_AS((void)classify_space(NormedSpace::lp(3, 1.5)), std::invalid_argument);
}
