#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mqslink/circuit.hpp"
#include "mqslink/config.hpp"
#include "mqslink/field_coupling.hpp"
#include "mqslink/geometry.hpp"
#include "mqslink/link_analysis.hpp"
#include "mqslink/lumped.hpp"
#include "mqslink/output.hpp"
#include "mqslink/parallel.hpp"
#include "mqslink/run.hpp"

namespace py = pybind11;
using namespace mqslink;

PYBIND11_MODULE(_mqslink, m) {
  m.doc() = "Magneto-quasistatic inductive link model";
  m.attr("__version__") = kArtifactVersion;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<CoilShape>(m, "CoilShape")
      .value("flat_spiral", CoilShape::flat_spiral)
      .value("helical", CoilShape::helical);

  py::class_<CoilSpec>(m, "CoilSpec")
      .def(py::init<>())
      .def_readwrite("turns", &CoilSpec::turns)
      .def_readwrite("inner_radius", &CoilSpec::inner_radius)
      .def_readwrite("wire_diameter", &CoilSpec::wire_diameter)
      .def_readwrite("wire_spacing", &CoilSpec::wire_spacing)
      .def_readwrite("shape", &CoilSpec::shape)
      .def_readwrite("sphere_radius", &CoilSpec::sphere_radius)
      .def_readwrite("conductivity", &CoilSpec::conductivity)
      .def_readwrite("parasitic_capacitance", &CoilSpec::parasitic_capacitance)
      .def("outer_diameter", &CoilSpec::outer_diameter);

  m.def("nominal_tx_spec", &nominal_tx_spec);
  m.def("nominal_rx_spec", &nominal_rx_spec);

  m.def("current_sheet_inductance", &current_sheet_inductance, py::arg("spec"));
  m.def("wheeler_inductance", [](const CoilSpec& s) {
    const auto e = wheeler_inductance(s);
    return py::make_tuple(e.inductance, to_string(e.validity));
  });
  m.def("skin_depth", &skin_depth, py::arg("frequency"), py::arg("conductivity") = 5.8e7);
  m.def("ac_resistance", &ac_resistance, py::arg("spec"), py::arg("frequency"));
  m.def("tune_capacitance", [](double l, double f0) { return tune_capacitance(l, f0).capacitance; },
        py::arg("inductance"), py::arg("f0"));
  m.def("coaxial_mutual_oracle", &coaxial_mutual_oracle, py::arg("r1"), py::arg("r2"), py::arg("z"));
  m.def("loop_mutual_inductance",
        [](double r1, double r2, double z, int segments) {
          const auto a = make_loop(r1, segments);
          Pose p;
          p.center = Vec3(0, 0, z);
          const auto b = apply_pose(make_loop(r2, segments), p);
          return mutual_inductance(a, b).mutual_inductance;
        },
        py::arg("r1"), py::arg("r2"), py::arg("z"), py::arg("segments") = 720);
  m.def("channel_capacity",
        [](double bw, double snr, const std::string& conv) {
          return channel_capacity(bw, snr, conv == "power" ? SnrConvention::power : SnrConvention::voltage);
        },
        py::arg("bandwidth"), py::arg("snr_db"), py::arg("convention") = "voltage");
  m.def("format_double", &format_double);

  m.def("default_config_text", &default_config_text);
  m.def("config_digest",
        [](const std::string& text, bool allow_defaults) {
          return config_digest(parse_config_text(text, "<string>", {allow_defaults}));
        },
        py::arg("text"), py::arg("allow_defaults") = false);
  m.def("validate_config",
        [](const std::string& text, bool allow_defaults) {
          const auto c = parse_config_text(text, "<string>", {allow_defaults});
          py::list names;
          for (const auto& r : c.requests) names.append(r.name);
          return names;
        },
        py::arg("text"), py::arg("allow_defaults") = false);
  m.def("run",
        [](const std::string& text, const std::string& out_dir, bool allow_defaults, std::size_t threads) {
          const auto c = parse_config_text(text, "<string>", {allow_defaults});
          set_thread_count(threads);
          RunReport rep;
          {
            py::gil_scoped_release release;
            rep = run_scenario(c, out_dir);
          }
          return report_json(rep);
        },
        py::arg("config_text"), py::arg("out_dir"), py::arg("allow_defaults") = false, py::arg("threads") = 1,
        "Runs a config and returns the report JSON text.");
}
