#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "banachlab/approx.hpp"
#include "banachlab/bounds.hpp"
#include "banachlab/experiment.hpp"
#include "banachlab/hermitian.hpp"
#include "banachlab/spaces.hpp"
#include "banachlab/twisted.hpp"
#include "banachlab/type_cotype.hpp"

namespace py = pybind11;
using namespace banachlab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical toolkit for twisted sums, type/cotype constants and the linear "
            "stability of almost-symmetries on finite dimensional Banach spaces";

  // spaces ------------------------------------------------------------
  py::class_<DualNormResult>(m, "DualNormResult")
      .def_readonly("value", &DualNormResult::value)
      .def_readonly("certified", &DualNormResult::certified)
      .def_readonly("samples", &DualNormResult::samples);

  py::class_<NormedSpace>(m, "NormedSpace")
      .def_static("lp", &NormedSpace::lp, py::arg("d"), py::arg("r"))
      .def_static("schatten", &NormedSpace::schatten, py::arg("d"), py::arg("r"))
      .def_property_readonly("dim", &NormedSpace::dim)
      .def_property_readonly("matrix_dim", &NormedSpace::matrix_dim)
      .def("norm", &NormedSpace::norm, py::arg("x"))
      .def("dual_norm", &NormedSpace::dual_norm, py::arg("xi"))
      .def("dual_attaining", &NormedSpace::dual_attaining, py::arg("w"))
      .def("sample_unit", py::overload_cast<std::uint64_t>(&NormedSpace::sample_unit, py::const_),
           py::arg("seed"))
      .def("__repr__", [](const NormedSpace& s) { return "<NormedSpace " + s.describe() + ">"; });

  m.def("hermitian_to_coords", &hermitian_to_coords, py::arg("matrix"));
  m.def("coords_to_hermitian", &coords_to_hermitian, py::arg("coords"), py::arg("d"));
  m.def(
      "spectral_decompose",
      [](const Eigen::MatrixXcd& x) {
        std::vector<std::pair<double, Eigen::MatrixXcd>> out;
        for (const auto& c : spectral_decompose(x))
          out.emplace_back(c.eigenvalue, c.projection.matrix());
        return out;
      },
      py::arg("x"), "Deterministic spectral decomposition into (eigenvalue, projection) pairs");
  m.def("haar_unitary", py::overload_cast<int, std::uint64_t>(&haar_unitary), py::arg("d"),
        py::arg("seed"));
  m.def("conjugation_matrix", &conjugation_matrix, py::arg("u"), py::arg("antiunitary") = false);

  // type / cotype ------------------------------------------------------
  py::class_<SignEnsemble>(m, "SignEnsemble")
      .def_static("rademacher_exact", &SignEnsemble::rademacher_exact)
      .def_static("rademacher_mc", &SignEnsemble::rademacher_mc, py::arg("samples"),
                  py::arg("seed"))
      .def_static("gaussian", &SignEnsemble::gaussian, py::arg("samples") = 20000,
                  py::arg("seed") = 0);

  py::class_<MomentEstimate>(m, "MomentEstimate")
      .def_readonly("value", &MomentEstimate::value)
      .def_readonly("standard_error", &MomentEstimate::standard_error)
      .def_readonly("samples", &MomentEstimate::samples)
      .def_readonly("exact", &MomentEstimate::exact);

  py::class_<RatioEstimate>(m, "RatioEstimate")
      .def_readonly("value", &RatioEstimate::value)
      .def_readonly("standard_error", &RatioEstimate::standard_error);

  py::class_<OptimizationBudget>(m, "OptimizationBudget")
      .def(py::init<>())
      .def_readwrite("restarts", &OptimizationBudget::restarts)
      .def_readwrite("steps", &OptimizationBudget::steps);

  py::class_<TypeEstimate>(m, "TypeEstimate")
      .def_readonly("n", &TypeEstimate::n)
      .def_readonly("value", &TypeEstimate::value)
      .def_readonly("standard_error", &TypeEstimate::standard_error)
      .def_readonly("witness", &TypeEstimate::witness);

  m.def("ensemble_second_moment", &ensemble_second_moment, py::arg("space"), py::arg("family"),
        py::arg("ensemble"));
  m.def("type2_ratio", &type2_ratio, py::arg("space"), py::arg("family"), py::arg("ensemble"));
  m.def("cotype2_ratio", &cotype2_ratio, py::arg("space"), py::arg("family"), py::arg("ensemble"));
  m.def("estimate_type2", &estimate_type2, py::arg("space"), py::arg("n"), py::arg("budget"),
        py::arg("seed"), py::arg("ensemble") = SignEnsemble::rademacher_exact());
  m.def("estimate_cotype2", &estimate_cotype2, py::arg("space"), py::arg("n"), py::arg("budget"),
        py::arg("seed"), py::arg("ensemble") = SignEnsemble::rademacher_exact());

  py::enum_<SpaceClass>(m, "SpaceClass")
      .value("L1", SpaceClass::L1)
      .value("Hilbert", SpaceClass::Hilbert)
      .value("Linf", SpaceClass::Linf)
      .value("S1", SpaceClass::S1)
      .value("Sinf", SpaceClass::Sinf);
  py::enum_<ConstantKind>(m, "ConstantKind")
      .value("Type", ConstantKind::Type)
      .value("Cotype", ConstantKind::Cotype);
  py::class_<Table1Bound>(m, "Table1Bound")
      .def_readonly("value", &Table1Bound::value)
      .def_readonly("asymptotic", &Table1Bound::asymptotic)
      .def_readonly("gaussian", &Table1Bound::gaussian);
  m.def("table1_upper", &table1_upper, py::arg("space_class"), py::arg("d"), py::arg("kind"),
        py::arg("p_or_q"), py::arg("gaussian") = false);
  m.def("consistency_cap", &consistency_cap, py::arg("space_class"), py::arg("d"), py::arg("kind"),
        py::arg("p_or_q"), py::arg("gaussian") = false);
  m.def("gaussian_conversion_factor", &gaussian_conversion_factor);

  // almost maps ---------------------------------------------------------
  py::class_<RankOneProjection>(m, "RankOneProjection")
      .def_static("from_vector", &RankOneProjection::from_vector, py::arg("v"))
      .def_static("from_matrix", &RankOneProjection::from_matrix, py::arg("p"))
      .def_property_readonly("vector", &RankOneProjection::vector)
      .def_property_readonly("matrix", &RankOneProjection::matrix)
      .def_property_readonly("coords", &RankOneProjection::coords);

  py::class_<AlmostSymmetry>(m, "AlmostSymmetry")
      .def_readonly("dim", &AlmostSymmetry::dim)
      .def_readonly("epsilon_certificate", &AlmostSymmetry::epsilon_certificate)
      .def_readonly("provenance", &AlmostSymmetry::provenance)
      .def("__call__", [](const AlmostSymmetry& f, const RankOneProjection& p) { return f.eval(p); });

  py::class_<HomogeneousMap>(m, "HomogeneousMap")
      .def_readonly("delta_certificate", &HomogeneousMap::delta_certificate)
      .def_readonly("provenance", &HomogeneousMap::provenance)
      .def_property_readonly("domain", [](const HomogeneousMap& f) { return f.domain; })
      .def_property_readonly("codomain", [](const HomogeneousMap& f) { return f.codomain; })
      .def("__call__", [](const HomogeneousMap& f, const Eigen::VectorXd& x) { return f.eval(x); });

  py::class_<BallMap>(m, "BallMap")
      .def_readonly("dim", &BallMap::dim)
      .def_readonly("epsilon_certificate", &BallMap::epsilon_certificate)
      .def("__call__", [](const BallMap& f, const Eigen::VectorXd& x) { return f.eval(x); });

  py::class_<EpsilonInterval>(m, "EpsilonInterval")
      .def_readonly("lower", &EpsilonInterval::lower)
      .def_readonly("upper", &EpsilonInterval::upper)
      .def_readonly("grid_points", &EpsilonInterval::grid_points)
      .def_readonly("covering_radius", &EpsilonInterval::covering_radius);

  m.def("wigner_symmetry", &wigner_symmetry, py::arg("u"), py::arg("antiunitary") = false);
  m.def("perturbed_symmetry", &perturbed_symmetry, py::arg("u"), py::arg("eta"), py::arg("seed"));
  m.def("epsilon_estimate", &epsilon_estimate, py::arg("f"), py::arg("pair_budget"),
        py::arg("seed"));
  m.def("epsilon_oracle_bloch", &epsilon_oracle_bloch, py::arg("f"), py::arg("grid_resolution"));
  m.def("extend_projective", &extend_projective, py::arg("f"));
  m.def("global_symmetry", &global_symmetry, py::arg("u"), py::arg("antiunitary") = false);
  m.def("perturbed_global_symmetry", &perturbed_global_symmetry, py::arg("u"), py::arg("eta"),
        py::arg("seed"));
  m.def("extend_global", &extend_global, py::arg("f"));
  m.def("delta_estimate", &delta_estimate, py::arg("f"), py::arg("family_budget"),
        py::arg("max_family_size"), py::arg("seed"));
  m.def("wquasi_residual", &wquasi_residual, py::arg("f"), py::arg("pair_samples"),
        py::arg("seed"));

  // twisted sums ---------------------------------------------------------
  py::class_<TwistedVector>(m, "TwistedVector")
      .def(py::init([](const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
             return TwistedVector{y, x};
           }),
           py::arg("y"), py::arg("x"))
      .def_readwrite("y", &TwistedVector::y)
      .def_readwrite("x", &TwistedVector::x);

  py::class_<TwistedSumSpace, std::shared_ptr<TwistedSumSpace>>(m, "TwistedSumSpace")
      .def(py::init<NormedSpace, NormedSpace, HomogeneousMap, double>(), py::arg("y_space"),
           py::arg("x_space"), py::arg("f"), py::arg("delta"))
      .def_readonly("delta", &TwistedSumSpace::delta)
      .def_property_readonly("dim", &TwistedSumSpace::dim);

  py::class_<EnvelopeUpperResult>(m, "EnvelopeUpperResult")
      .def_readonly("value", &EnvelopeUpperResult::value)
      .def_readonly("witness_value", &EnvelopeUpperResult::witness_value);
  py::class_<EnvelopeLowerResult>(m, "EnvelopeLowerResult")
      .def_readonly("value", &EnvelopeLowerResult::value)
      .def_readonly("certified", &EnvelopeLowerResult::certified)
      .def_readonly("certification_samples", &EnvelopeLowerResult::certification_samples);
  py::class_<SandwichReport>(m, "SandwichReport")
      .def_readonly("ok", &SandwichReport::ok)
      .def_readonly("samples", &SandwichReport::samples)
      .def_readonly("worst_upper_vs_quasi", &SandwichReport::worst_upper_vs_quasi)
      .def_readonly("worst_quasi_vs_twice", &SandwichReport::worst_quasi_vs_twice)
      .def_readonly("worst_lower_vs_upper", &SandwichReport::worst_lower_vs_upper);

  m.def("quasi_norm", &quasi_norm, py::arg("z"), py::arg("v"));
  m.def("envelope_upper", &envelope_upper, py::arg("z"), py::arg("v"), py::arg("parts") = 0,
        py::arg("restarts") = 4, py::arg("seed") = 0);
  m.def("envelope_lower", &envelope_lower, py::arg("z"), py::arg("v"),
        py::arg("cutting_plane_budget") = 6, py::arg("seed") = 0);
  m.def("sandwich_check", &sandwich_check, py::arg("z"), py::arg("sample_count"), py::arg("seed"),
        py::arg("with_lower") = true);

  // bounds ----------------------------------------------------------------
  py::class_<TypeStepSpec>(m, "TypeStepSpec")
      .def(py::init<>())
      .def_readwrite("tY", &TypeStepSpec::tY)
      .def_readwrite("tX", &TypeStepSpec::tX)
      .def_readwrite("multiplier", &TypeStepSpec::multiplier)
      .def_readwrite("name", &TypeStepSpec::name);
  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("name", &BoundReport::name)
      .def_readonly("value", &BoundReport::value)
      .def_readonly("base", &BoundReport::base)
      .def_readonly("target_n", &BoundReport::target_n)
      .def_readonly("reached_n", &BoundReport::reached_n)
      .def_readonly("steps", &BoundReport::steps)
      .def_readonly("grid_closed_form", &BoundReport::grid_closed_form)
      .def_readonly("paper_final_form", &BoundReport::paper_final_form);

  m.def("ts_type_step", &ts_type_step, py::arg("tY"), py::arg("tX"), py::arg("tZn"));
  m.def("caratheodory_cap", &caratheodory_cap, py::arg("space_dim"));
  m.def("type2_twisted_bound", &type2_twisted_bound, py::arg("base"), py::arg("step"),
        py::arg("target_n"));
  m.def("replay_trace", &replay_trace, py::arg("report"));
  m.def("hilbert_route_type_bound", &hilbert_route_type_bound, py::arg("d"),
        py::arg("target_n") = 0);
  m.def("sinf_route_type_bound", &sinf_route_type_bound, py::arg("d"), py::arg("target_n") = 0);
  m.def("theorem1_rhs", &theorem1_rhs, py::arg("delta"), py::arg("t2z"), py::arg("c2x"),
        py::arg("t2z_dual"), py::arg("c2y_dual"));
  m.def("wigner_bound", &wigner_bound, py::arg("d"), py::arg("epsilon"));
  m.def("global_bound", &global_bound, py::arg("d"), py::arg("epsilon"));

  // approx + experiments ----------------------------------------------------
  py::enum_<Route>(m, "Route").value("Wigner", Route::Wigner).value("Global", Route::Global);

  py::class_<LinearMapFit>(m, "LinearMapFit")
      .def_readonly("matrix", &LinearMapFit::matrix)
      .def_readonly("residual", &LinearMapFit::residual)
      .def_readonly("converged", &LinearMapFit::converged)
      .def_readonly("rounds", &LinearMapFit::rounds)
      .def_readonly("samples", &LinearMapFit::samples);

  py::class_<InstanceBudgets>(m, "InstanceBudgets")
      .def(py::init<>())
      .def_readwrite("eps_pairs", &InstanceBudgets::eps_pairs)
      .def_readwrite("delta_families", &InstanceBudgets::delta_families)
      .def_readwrite("delta_family_size", &InstanceBudgets::delta_family_size)
      .def_readwrite("minimax_samples", &InstanceBudgets::minimax_samples)
      .def_readwrite("minimax_rounds", &InstanceBudgets::minimax_rounds)
      .def_readwrite("approx_samples", &InstanceBudgets::approx_samples)
      .def_readwrite("chain_samples", &InstanceBudgets::chain_samples);

  py::class_<StabilityInstance>(m, "StabilityInstance")
      .def_readonly("d", &StabilityInstance::d)
      .def_readonly("eta", &StabilityInstance::eta)
      .def_readonly("epsilon_certificate", &StabilityInstance::epsilon_certificate)
      .def_readonly("epsilon_lower", &StabilityInstance::epsilon_lower)
      .def_readonly("delta_used", &StabilityInstance::delta_used)
      .def_readonly("delta_floored", &StabilityInstance::delta_floored)
      .def_readonly("delta_lower", &StabilityInstance::delta_lower)
      .def_readonly("h_matrix", &StabilityInstance::h_matrix)
      .def_readonly("lhs_sphere", &StabilityInstance::lhs_sphere)
      .def_readonly("lhs_projective", &StabilityInstance::lhs_projective)
      .def_readonly("thm1_rhs_value", &StabilityInstance::thm1_rhs_value)
      .def_readonly("route_bound", &StabilityInstance::route_bound)
      .def_readonly("eq12_ratio", &StabilityInstance::eq12_ratio)
      .def_readonly("eq13_ratio", &StabilityInstance::eq13_ratio)
      .def_readonly("eq14_gap", &StabilityInstance::eq14_gap)
      .def_readonly("pass_delta", &StabilityInstance::pass_delta)
      .def_readonly("pass_thm1", &StabilityInstance::pass_thm1)
      .def_readonly("pass_route_bound", &StabilityInstance::pass_route_bound)
      .def_readonly("pass_chain", &StabilityInstance::pass_chain)
      .def_readonly("passed", &StabilityInstance::pass)
      .def_readonly("failure", &StabilityInstance::failure);

  m.def("best_linear_map", &best_linear_map, py::arg("f"), py::arg("sample_budget"),
        py::arg("solver_tolerance"), py::arg("seed"));
  m.def("approx_error", &approx_error, py::arg("f"), py::arg("h"), py::arg("sample_budget"),
        py::arg("seed"), py::arg("over_projections") = false);
  m.def("verify_instance", &verify_instance, py::arg("route"), py::arg("d"), py::arg("eta"),
        py::arg("seed"), py::arg("budgets") = InstanceBudgets{}, py::arg("delta_floor") = 1e-9);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("route", &ExperimentConfig::route)
      .def_readwrite("d_list", &ExperimentConfig::d_list)
      .def_readwrite("eta_list", &ExperimentConfig::eta_list)
      .def_readwrite("seeds", &ExperimentConfig::seeds)
      .def_readwrite("budgets", &ExperimentConfig::budgets)
      .def_readwrite("sandwich_samples", &ExperimentConfig::sandwich_samples)
      .def_readwrite("jobs", &ExperimentConfig::jobs)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("delta_floor", &ExperimentConfig::delta_floor)
      .def_readwrite("out_path", &ExperimentConfig::out_path);

  py::class_<ResultRow>(m, "ResultRow")
      .def_readonly("route", &ResultRow::route)
      .def_readonly("d", &ResultRow::d)
      .def_readonly("eta", &ResultRow::eta)
      .def_readonly("seed", &ResultRow::seed)
      .def_readonly("epsilon_cert", &ResultRow::epsilon_cert)
      .def_readonly("epsilon_lb", &ResultRow::epsilon_lb)
      .def_readonly("delta_lb", &ResultRow::delta_lb)
      .def_readonly("lhs_estimate", &ResultRow::lhs_estimate)
      .def_readonly("thm1_rhs", &ResultRow::thm1_rhs)
      .def_readonly("route_bound", &ResultRow::route_bound)
      .def_readonly("sandwich_worst_margin", &ResultRow::sandwich_worst_margin)
      .def_readonly("passed", &ResultRow::pass)
      .def_readonly("error", &ResultRow::error);

  m.def("parse_config_text", &parse_config_text, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("run_sweep", &run_sweep, py::arg("config"));
  m.def(
      "check_all",
      [](const ExperimentConfig& cfg) {
        std::ostringstream os;
        const int status = check_all(cfg, os);
        return py::make_tuple(status, os.str());
      },
      py::arg("config"), "Run the property suite; returns (exit_status, report_text)");
  m.def("csv_header", &csv_header);
}
