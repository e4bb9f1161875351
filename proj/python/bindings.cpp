#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hstumor/config.hpp"
#include "hstumor/errors.hpp"
#include "hstumor/oracle.hpp"
#include "hstumor/runner.hpp"
#include "hstumor/specfun.hpp"

namespace py = pybind11;
using namespace hst;

namespace {

py::dict outcome_dict(const RunOutcome& r) {
  py::dict d;
  d["exit_code"] = r.exit_code;
  d["dir"] = r.dir.string();
  d["error"] = r.error;
  d["steps"] = r.steps;
  d["r0_error"] = r.r0_error >= 0.0 ? py::object(py::float_(r.r0_error)) : py::object(py::none());
  d["r1_error"] = r.r1_error >= 0.0 ? py::object(py::float_(r.r1_error)) : py::object(py::none());
  return d;
}

}  // namespace

PYBIND11_MODULE(_impl, m) {
  m.doc() = "Hele-Shaw tumor growth solvers";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());

  py::enum_<GrowthLaw>(m, "GrowthLaw").value("linear", GrowthLaw::Linear).value("threshold", GrowthLaw::Threshold);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double g0, double lambda, double c_b, double c_bar, double n_c, GrowthLaw law) {
             ModelParams p{g0, lambda, c_b, c_bar, n_c, law};
             p.validate();
             return p;
           }),
           py::kw_only(), py::arg("g0") = 1.0, py::arg("lam") = 1.0, py::arg("c_b") = 10.0, py::arg("c_bar") = 5.0,
           py::arg("n_c") = 1e-3, py::arg("law") = GrowthLaw::Threshold)
      .def_readonly("g0", &ModelParams::g0)
      .def_readonly("lam", &ModelParams::lambda)
      .def_readonly("c_b", &ModelParams::c_b)
      .def_readonly("c_bar", &ModelParams::c_bar)
      .def_readonly("n_c", &ModelParams::n_c)
      .def_readonly("law", &ModelParams::law);

  m.def("bessel_i0", &specfun::bessel_i0);
  m.def("bessel_i1", &specfun::bessel_i1);
  m.def("bessel_k0", &specfun::bessel_k0);
  m.def("bessel_k1", &specfun::bessel_k1);

  m.def("threshold_R_star", &oracle::threshold_R_star);
  m.def("threshold_R_double_star", &oracle::threshold_R_double_star);
  m.def("solve_R0_given_R1", &oracle::solve_R0_given_R1, py::arg("r1"), py::arg("params"));
  m.def("rate", &oracle::rate, py::arg("r1"), py::arg("params"));
  m.def(
      "integrate_radial",
      [](double r1, double t_final, const ModelParams& p, std::vector<double> times) {
        const oracle::RadialTrajectory t = oracle::integrate_radial(r1, t_final, p, 1e-10, times);
        py::list out;
        for (const oracle::RadialState& s : t.states)
          out.append(py::make_tuple(s.t, s.r0, s.r1, oracle::regime_name(s.regime)));
        return out;
      },
      py::arg("r1"), py::arg("t_final"), py::arg("params"), py::arg("times") = std::vector<double>{},
      "Radial oracle: list of (t, R0, R1, regime).");

  m.def("format_double", &format_double);
  m.def(
      "run_config",
      [](const std::filesystem::path& config, const std::filesystem::path& output) {
        const RunConfig cfg = load_config(config);
        RunOutcome r;
        {
          py::gil_scoped_release release;
          r = run(cfg, output);
        }
        return outcome_dict(r);
      },
      py::arg("config"), py::arg("output"), "Run a config file; outputs go to the given directory.");
}
