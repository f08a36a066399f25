#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "msgate/analysis.hpp"
#include "msgate/archplan.hpp"
#include "msgate/commands.hpp"
#include "msgate/config.hpp"
#include "msgate/corrections.hpp"
#include "msgate/simulate.hpp"

namespace py = pybind11;
using namespace msgate;

namespace {

// JSON goes through text to avoid a second converter.
py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict bundle_to_dict(const ResultBundle& b) {
  py::dict out;
  out["command"] = b.command;
  out["summary"] = to_python(b.summary);
  py::dict tables;
  for (const auto& [name, t] : b.tables) {
    py::dict tab;
    tab["columns"] = t.columns;
    tab["rows"] = t.rows;
    tables[py::str(name)] = tab;
  }
  out["tables"] = tables;
  out["warnings"] = b.warnings;
  out["exit_code"] = b.exit_code;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dressed-state MS gate simulator core";
  m.attr("__version__") = MSGATE_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def(
      "run",
      [](const std::string& command, const py::object& config, int jobs) {
        Json doc = config.is_none() ? Json::object() : from_python(config);
        const RunConfig c = parse_config(resolve_presets(doc));
        ResultBundle b;
        {
          py::gil_scoped_release release;
          b = run_command(command, c, jobs);
        }
        return bundle_to_dict(b);
      },
      py::arg("command"), py::arg("config") = py::none(), py::arg("jobs") = 1,
      "Run a CLI command on a config dict; returns summary and tables.");
  m.def(
      "load_preset", [](const std::string& name) { return to_python(load_preset(name)); }, py::arg("name"));
  m.def(
      "resolve_config",
      [](const py::object& config) { return to_python(parse_config(resolve_presets(from_python(config))).effective); },
      py::arg("config"));

  m.def("bell_fidelity", &bell_fidelity, py::arg("populations"), py::arg("amplitude"));
  m.def("parity_sigma", &parity_sigma, py::arg("parity"), py::arg("shots"));
  m.def(
      "fit_parity",
      [](const std::vector<double>& phi, const std::vector<double>& parity, const std::vector<double>& weights) {
        const ParityFit f = fit_parity(phi, parity, weights);
        py::dict d;
        d["amplitude"] = f.amplitude;
        d["amplitude_error"] = f.amplitude_error();
        d["phase"] = f.phase;
        d["offset"] = f.offset;
        d["rms_residual"] = f.rms_residual;
        d["covariance"] = Eigen::MatrixXd(f.covariance);
        return d;
      },
      py::arg("phi"), py::arg("parity"), py::arg("weights") = std::vector<double>{});

  m.def("crosstalk_estimate", &crosstalk_estimate, py::arg("omega"), py::arg("delta"));
  m.def(
      "shaped_pulse_crosstalk",
      [](double omega_max, double delta, double t_w, double t_h) {
        const ShapedCrosstalk s = shaped_pulse_crosstalk(omega_max, delta, t_w, t_h);
        return py::make_tuple(s.time_averaged, s.residual);
      },
      py::arg("omega_max"), py::arg("delta"), py::arg("t_w"), py::arg("t_h"),
      "Returns (time_averaged, residual).");

  m.def(
      "correction_table",
      [](const std::string& preset_name) {
        const RunConfig c = parse_config(resolve_presets(load_preset(preset_name)));
        py::dict d;
        for (const auto& [name, v] : correction_table(correction_coefficients(c.params))) d[py::str(name)] = v;
        return d;
      },
      py::arg("preset") = "demonstrated");

  m.def("ms_unitary", [](double theta) { return Eigen::MatrixXcd(ms_unitary(theta)); }, py::arg("theta") = kPi / 4.0);
}
