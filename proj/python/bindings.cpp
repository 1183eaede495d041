#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracplate/acceptance.hpp"
#include "fracplate/errors.hpp"
#include "fracplate/fractional_calculus.hpp"
#include "fracplate/hidden_regularity.hpp"
#include "fracplate/report.hpp"
#include "fracplate/solver.hpp"
#include "fracplate/special_functions.hpp"
#include "fracplate/spectral_domain.hpp"
#include "fracplate/time_grid.hpp"

namespace py = pybind11;
using namespace fracplate;

namespace {

// Reports cross the boundary as canonical JSON text; the Python side decodes it.
std::string report_text(const VerificationReport& r) { return canonical_json(r.to_json(), -1); }

TimeGrid grid_from(py::array_t<double, py::array::c_style | py::array::forcecast> t) {
  return TimeGrid::from_nodes(std::vector<double>(t.data(), t.data() + t.size()));
}

py::array_t<double> to_array(std::vector<double> v) { return py::array_t<double>(v.size(), v.data()); }

}  // namespace

PYBIND11_MODULE(_fracplate, m) {
  m.doc() = "Fractional hinged-plate solver core";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  m.def("gamma", &gamma_fn, py::arg("x"));
  m.def("mittag_leffler", &mittag_leffler, py::arg("alpha"), py::arg("beta"), py::arg("z"));
  m.def(
      "ml_eval",
      [](double alpha, double beta, double z) {
        const MLEvaluation e = ml_eval({alpha, beta}, z);
        return py::make_tuple(e.value, e.est_abs_error, std::string(to_string(e.method)));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("z"), "(value, est_abs_error, method)");
  m.def(
      "ml_series_oracle", [](double a, double b, double z, int n) { return ml_series_oracle({a, b}, z, n); },
      py::arg("alpha"), py::arg("beta"), py::arg("z"), py::arg("n_terms"));

  py::class_<Domain>(m, "Domain")
      .def_static("parse", &Domain::parse, py::arg("spec"))
      .def_static("interval", &Domain::interval, py::arg("length"))
      .def_static("rectangle", &Domain::rectangle, py::arg("a"), py::arg("b"))
      .def_property_readonly("dimension", &Domain::dimension)
      .def_property_readonly("measure", &Domain::measure)
      .def("__repr__", &Domain::to_string);

  py::class_<EigenMode>(m, "EigenMode")
      .def_property_readonly("index", [](const EigenMode& e) { return e.index; })
      .def_readonly("mu", &EigenMode::mu)
      .def_readonly("lambda_", &EigenMode::lambda)
      .def("__repr__", &EigenMode::label);

  m.def("eigenmodes", &eigenmodes, py::arg("domain"), py::arg("count"));

  m.def(
      "graded_grid",
      [](double horizon, std::size_t nodes, double grading) {
        const TimeGrid g = TimeGrid::graded(horizon, nodes, grading);
        return to_array({g.nodes().begin(), g.nodes().end()});
      },
      py::arg("horizon"), py::arg("nodes"), py::arg("grading") = 1.0);

  m.def(
      "rl_integral",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> t,
         py::array_t<double, py::array::c_style | py::array::forcecast> f, double beta) {
        if (t.size() != f.size()) throw PreconditionError("t and f differ in length");
        const TimeSeries s(grid_from(t), std::vector<double>(f.data(), f.data() + f.size()));
        const TimeSeries r = rl_integral(s, beta);
        return to_array({r.data().begin(), r.data().end()});
      },
      py::arg("t"), py::arg("f"), py::arg("beta"));
  m.def(
      "gagliardo_seminorm",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> t,
         py::array_t<double, py::array::c_style | py::array::forcecast> f, double beta) {
        if (t.size() != f.size()) throw PreconditionError("t and f differ in length");
        return gagliardo_seminorm(TimeSeries(grid_from(t), std::vector<double>(f.data(), f.data() + f.size())), beta);
      },
      py::arg("t"), py::arg("f"), py::arg("beta"));

  py::class_<SpectralSolution>(m, "SpectralSolution")
      .def_property_readonly("alpha", &SpectralSolution::alpha)
      .def_property_readonly("horizon", &SpectralSolution::horizon)
      .def_property_readonly("modes", &SpectralSolution::modes)
      .def("coefficient", &SpectralSolution::coefficient, py::arg("n"), py::arg("t"))
      .def("coefficient_rate", &SpectralSolution::coefficient_rate, py::arg("n"), py::arg("t"))
      .def(
          "u", [](const SpectralSolution& s, double t, double x, double y) { return eval_u(s, t, {x, y}); },
          py::arg("t"), py::arg("x"), py::arg("y") = 0.0);

  m.def(
      "solve",
      [](const Domain& d, std::size_t N, double alpha, std::vector<double> u0, std::vector<double> u1,
         double horizon) { return solve(d, N, alpha, make_initial_data(d, std::move(u0), std::move(u1)), horizon); },
      py::arg("domain"), py::arg("modes"), py::arg("alpha"), py::arg("u0"), py::arg("u1"), py::arg("horizon") = 1.0);

  m.def(
      "mode_ode_residual",
      [](const SpectralSolution& s, std::size_t n, std::size_t nodes) {
        const ScaledResidual r =
            mode_ode_residual(s, n, TimeGrid::graded(s.horizon(), nodes, default_grading(s.alpha())));
        return r.relative();
      },
      py::arg("solution"), py::arg("n"), py::arg("nodes") = 2049);

  m.def(
      "trace_energy",
      [](const SpectralSolution& s, std::size_t nodes, bool lifted) {
        const TimeGrid g = TimeGrid::graded(s.horizon(), nodes, default_grading(s.alpha()));
        return trace_energy(normal_trace(s, g, lifted ? TraceKind::DeltaLifted : TraceKind::U));
      },
      py::arg("solution"), py::arg("nodes") = 2049, py::arg("lifted") = false);

  m.def(
      "static_identity_relative",
      [](const Domain& d, std::vector<double> w) {
        return static_multiplier_identity(coefficients_from_values(d, std::move(w)), MultiplierField(d)).relative;
      },
      py::arg("domain"), py::arg("w"));

  m.def(
      "filtered_identity_relative",
      [](const SpectralSolution& s, double beta, std::size_t nodes) {
        const TimeGrid g = TimeGrid::graded(s.horizon(), nodes, default_grading(s.alpha()));
        return filtered_identity(s, MultiplierField(s.domain()), beta, g, g.size() - 1).relative;
      },
      py::arg("solution"), py::arg("beta") = 0.25, py::arg("nodes") = 2049);

  m.def(
      "_direct_inequality_probe",
      [](const Domain& d, double alpha, double horizon, const std::string& family, std::vector<std::size_t> schedule,
         std::uint64_t seed, std::size_t nodes) {
        return report_text(
            direct_inequality_probe(d, alpha, horizon, FamilySpec::parse(family, seed), schedule, nodes));
      },
      py::arg("domain"), py::arg("alpha"), py::arg("horizon"), py::arg("family"), py::arg("schedule"),
      py::arg("seed") = 42, py::arg("nodes") = 1025);

  m.def("u1_sweep_ratios", &u1_sweep_ratios, py::arg("count"));
  m.def(
      "_acceptance_bundle", [](std::uint64_t seed) { return canonical_json(acceptance_bundle({seed})); },
      py::arg("seed") = 42);
}
