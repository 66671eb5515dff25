// Python face of the library: geometry, the mode-matching solver, the
// variational upper bound, the constant chain, the lemma oracles, the grid
// oracle, and the sweep/fit pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "winguide/asymptotics.hpp"
#include "winguide/constant_chain.hpp"
#include "winguide/fd_oracle.hpp"
#include "winguide/geometry.hpp"
#include "winguide/lemma_oracles.hpp"
#include "winguide/modematch.hpp"
#include "winguide/varbound.hpp"

namespace py = pybind11;
using namespace winguide;

PYBIND11_MODULE(winguide, m) {
  m.doc() = "Bound states of laterally window-coupled Dirichlet strips";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<CheckError>(m, "CheckError", PyExc_RuntimeError);

  py::class_<Geometry>(m, "Geometry")
      .def(py::init<double, double, double>(), py::arg("d1"), py::arg("d2"), py::arg("a"))
      .def_property_readonly("d1", &Geometry::d1)
      .def_property_readonly("d2", &Geometry::d2)
      .def_property_readonly("a", &Geometry::a)
      .def_property_readonly("d", &Geometry::d)
      .def("half_strip", &Geometry::half_strip)
      .def("__repr__", [](const Geometry& g) {
        return "Geometry(d1=" + std::to_string(g.d1()) + ", d2=" + std::to_string(g.d2()) +
               ", a=" + std::to_string(g.a()) + ")";
      });
  m.def("threshold", &threshold, py::arg("g"));
  m.def(
      "eigen_bracket",
      [](const Geometry& g) {
        const auto b = eigen_bracket(g);
        return py::make_tuple(b.e_min, b.e_max);
      },
      py::arg("g"));

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("Converged", SolveStatus::Converged)
      .value("NoEigenvalueResolved", SolveStatus::NoEigenvalueResolved)
      .value("PrecisionFloor", SolveStatus::PrecisionFloor);

  py::class_<EigenResult>(m, "EigenResult")
      .def_readonly("status", &EigenResult::status)
      .def_readonly("energy", &EigenResult::energy)
      .def_readonly("root_energy", &EigenResult::root_energy)
      .def_readonly("gap", &EigenResult::gap)
      .def_readonly("residual", &EigenResult::residual)
      .def_readonly("truncation_error", &EigenResult::truncation_error)
      .def_readonly("n_modes", &EigenResult::n_modes)
      .def_readonly("kernel_vector", &EigenResult::kernel_vector);
  m.def("solve_ground_state",
        [](const Geometry& g, double tol, int n_max) { return solve_ground_state(g, tol, n_max); },
        py::arg("g"), py::arg("tol") = 1e-6, py::arg("n_max") = 1024,
        py::call_guard<py::gil_scoped_release>());

  py::class_<SecularSystem>(m, "SecularSystem")
      .def_readonly("energy", &SecularSystem::energy)
      .def_readonly("n_inner", &SecularSystem::n_inner)
      .def_readonly("n_outer", &SecularSystem::n_outer)
      .def_readonly("matrix", &SecularSystem::matrix);
  m.def("assemble_secular", &assemble_secular, py::arg("g"), py::arg("E"), py::arg("n_inner"),
        py::arg("n_outer"));
  m.def("smallest_singular_value", &smallest_singular_value, py::arg("system"));

  py::class_<TrialParams>(m, "TrialParams")
      .def(py::init([](double alpha, double kappa, double eta) {
             return TrialParams{alpha, kappa, eta};
           }),
           py::arg("alpha") = 1.0, py::arg("kappa") = 0.0, py::arg("eta") = 0.0)
      .def_readwrite("alpha", &TrialParams::alpha)
      .def_readwrite("kappa", &TrialParams::kappa)
      .def_readwrite("eta", &TrialParams::eta);
  py::class_<TrialTerms>(m, "TrialTerms")
      .def_readonly("L", &TrialTerms::L)
      .def_readonly("psi2", &TrialTerms::psi2)
      .def_readonly("value", &TrialTerms::value);
  py::class_<TrialBound>(m, "TrialBound")
      .def_readonly("params", &TrialBound::params)
      .def_readonly("terms", &TrialBound::terms)
      .def_readonly("value", &TrialBound::value)
      .def_readonly("paper_chain_value", &TrialBound::paper_chain_value);
  m.def("trial_terms", &trial_terms, py::arg("g"), py::arg("params"));
  m.def("optimize_trial", &optimize_trial, py::arg("g"));

  py::class_<ConstantChain>(m, "ConstantChain")
      .def_readonly("d", &ConstantChain::d)
      .def_readonly("a_max", &ConstantChain::a_max)
      .def_readonly("C", &ConstantChain::C)
      .def_readonly("a_star", &ConstantChain::a_star)
      .def_readonly("delta", &ConstantChain::delta)
      .def_readonly("m", &ConstantChain::m)
      .def_readonly("c0", &ConstantChain::c0)
      .def_readonly("c1", &ConstantChain::c1);
  m.def("expint_e1", &expint_e1, py::arg("z"));
  m.def("gamma_constant", &gamma_constant, py::arg("d"));
  m.def("build_chain", &build_chain, py::arg("d"), py::arg("a_max"));

  py::class_<Grid1D>(m, "Grid1D")
      .def(py::init([](int n, double t0, double t1) {
             return Grid1D{n, t0, t1};
           }),
           py::arg("n"), py::arg("t0"), py::arg("t1"));
  py::class_<Lemma3Result>(m, "Lemma3Result")
      .def_readonly("rayleigh_min", &Lemma3Result::rayleigh_min)
      .def_readonly("epsilon2", &Lemma3Result::epsilon2)
      .def_readonly("xi1", &Lemma3Result::xi1)
      .def_readonly("route_epsilon1", &Lemma3Result::route_epsilon1)
      .def_readonly("route_epsilon2", &Lemma3Result::route_epsilon2);
  py::class_<Lemma4Result>(m, "Lemma4Result")
      .def_readonly("numeric", &Lemma4Result::numeric)
      .def_readonly("closed_form", &Lemma4Result::closed_form);
  m.def(
      "lemma1_minimum",
      [](double mval, int n) { return lemma1_minimum(mval, n).value; },
      py::arg("m"), py::arg("n") = 4096);
  m.def(
      "lemma2_minimum",
      [](double b, int n) { return lemma2_minimum(b, n).value; },
      py::arg("b"), py::arg("n") = 4096);
  m.def("lemma3_gap", &lemma3_gap, py::arg("d"), py::arg("grid"));
  m.def("lemma4_constant", &lemma4_constant, py::arg("m"), py::arg("d"), py::arg("a"),
        py::arg("grid"));
  m.def("lemma4_c0", &lemma4_c0, py::arg("m"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](double h, double X) {
             return GridSpec{h, X};
           }),
           py::arg("h"), py::arg("X"))
      .def_readwrite("h", &GridSpec::h)
      .def_readwrite("X", &GridSpec::X);
  py::class_<FdResult>(m, "FdResult")
      .def_readonly("energy", &FdResult::energy)
      .def_readonly("energy_h", &FdResult::energy_h)
      .def_readonly("energy_h2", &FdResult::energy_h2)
      .def_readonly("h", &FdResult::h)
      .def_readonly("X", &FdResult::X)
      .def_readonly("unknowns", &FdResult::unknowns)
      .def_readonly("discrete_threshold", &FdResult::discrete_threshold);
  m.def("fd_ground_state", &fd_ground_state, py::arg("g"), py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("a", &SweepRow::a)
      .def_readonly("energy", &SweepRow::energy)
      .def_readonly("gap", &SweepRow::gap)
      .def_readonly("n_modes", &SweepRow::n_modes)
      .def_readonly("residual", &SweepRow::residual)
      .def_readonly("status", &SweepRow::status);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("fit_slope", &SweepResult::fit_slope)
      .def_readonly("fit_coefficient", &SweepResult::fit_coefficient)
      .def_readonly("fit_window_lo", &SweepResult::fit_window_lo)
      .def_readonly("fit_window_hi", &SweepResult::fit_window_hi);
  m.def("sweep", &sweep, py::arg("d1"), py::arg("d2"), py::arg("half_widths"),
        py::arg("tol") = 1e-6, py::arg("n_max") = 1024, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  py::class_<FitResult>(m, "FitResult")
      .def_readonly("slope", &FitResult::slope)
      .def_readonly("coefficient", &FitResult::coefficient)
      .def_readonly("n_used", &FitResult::n_used)
      .def_readonly("rms", &FitResult::rms);
  m.def("fit_power_law", &fit_power_law, py::arg("a_gap"), py::arg("lower_half") = true);
}
