// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bendbeam/codeword.hpp"
#include "bendbeam/error.hpp"
#include "bendbeam/oracle.hpp"
#include "bendbeam/propagation.hpp"
#include "bendbeam/scenario.hpp"
#include "bendbeam/trajectory.hpp"

namespace py = pybind11;
using namespace bendbeam;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <class T>
py::array_t<T> to_numpy(std::span<const T> v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Grid1D grid_of(const DArray& x) {
  if (x.ndim() != 1 || x.size() < 2) throw DomainError("x must be a 1D array of at least two nodes");
  const double* p = x.data();
  const double step = p[1] - p[0];
  for (py::ssize_t i = 2; i < x.size(); ++i) {
    if (std::abs(p[i] - p[i - 1] - step) > 1e-9 * std::abs(step)) throw DomainError("x must be uniformly spaced");
  }
  return make_grid(p[0], step, static_cast<std::size_t>(x.size()));
}

BorderPolicy policy_of(const std::string& s) {
  if (s == "enforce") return BorderPolicy::enforce;
  if (s == "report") return BorderPolicy::report;
  if (s == "ignore") return BorderPolicy::ignore;
  throw DomainError("border must be enforce, report or ignore");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curved-beam near-field wavefront simulator (native core)";
  m.attr("__version__") = library_version();

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<Medium>(m, "Medium")
      .def_readonly("frequency_hz", &Medium::frequency_hz)
      .def_readonly("wavelength_m", &Medium::wavelength_m)
      .def_readonly("wavenumber_rad_per_m", &Medium::wavenumber_rad_per_m)
      .def("__repr__", [](const Medium& md) {
        return "Medium(frequency_hz=" + std::to_string(md.frequency_hz) + ")";
      });
  m.def("make_medium", &make_medium, py::arg("frequency_hz"));

  m.def(
      "airy_field",
      [](const DArray& x, double z, double frequency_hz, double beta, double alpha, double x0, double z0) {
        const Medium md = make_medium(frequency_hz);
        return to_numpy<cplx>(airy_slice({beta, alpha, x0, z0}, grid_of(x), z, md).values());
      },
      py::arg("x"), py::arg("z"), py::arg("frequency_hz"), py::arg("beta") = 0.002, py::arg("alpha") = 0.0,
      py::arg("x0") = 0.0, py::arg("z0") = 0.0, "Closed-form Airy envelope sampled on a uniform x array.");
  m.def(
      "aaf_field",
      [](const DArray& x, double z, double frequency_hz, double beta, double alpha, double x0, double z0) {
        const Medium md = make_medium(frequency_hz);
        return to_numpy<cplx>(aaf_slice({beta, alpha, x0, z0}, grid_of(x), z, md).values());
      },
      py::arg("x"), py::arg("z"), py::arg("frequency_hz"), py::arg("beta") = 0.002, py::arg("alpha") = 0.0,
      py::arg("x0") = 0.0, py::arg("z0") = 0.0);

  m.def(
      "parabolic_phase",
      [](const DArray& x, double frequency_hz, double beta, double x0, double z0, bool paraxial) {
        const Medium md = make_medium(frequency_hz);
        const ParabolicTrajectory t{beta, x0, z0};
        const PhaseProfile p = paraxial ? parabolic_phase_paraxial(t, md, grid_of(x))
                                        : parabolic_phase_nonparaxial(t, md, grid_of(x));
        return to_numpy<double>(std::span<const double>(p.phase()));
      },
      py::arg("x"), py::arg("frequency_hz"), py::arg("beta"), py::arg("x0") = 0.0, py::arg("z0") = 0.0,
      py::arg("paraxial") = true);

  m.def(
      "propagate",
      [](const DArray& x, const CArray& field, const std::vector<double>& z_list, double frequency_hz,
         bool band_limit, const std::string& border) {
        const Grid1D g = grid_of(x);
        if (field.ndim() != 1 || static_cast<std::size_t>(field.size()) != g.count)
          throw DomainError("field must match x");
        const Medium md = make_medium(frequency_hz);
        const FieldSlice src(g, 0.0, std::vector<cplx>(field.data(), field.data() + field.size()));
        std::vector<py::array_t<cplx>> out;
        {
          py::gil_scoped_release nogil;
          const auto slices = propagate_scan(src, md, z_list, {}, {band_limit, policy_of(border)});
          py::gil_scoped_acquire gil;
          for (const FieldSlice& s : slices) out.push_back(to_numpy<cplx>(s.values()));
        }
        return out;
      },
      py::arg("x"), py::arg("field"), py::arg("z_list"), py::arg("frequency_hz"), py::arg("band_limit") = true,
      py::arg("border") = "report", "Angular-spectrum propagation of a 1D field to each z in z_list.");

  m.def(
      "quantize_phases", [](const std::vector<double>& p, int bits) { return quantize_phases(p, bits); },
      py::arg("phases"), py::arg("bit_depth"));
  m.def(
      "grating_orders",
      [](double spacing_m, double frequency_hz) {
        std::vector<std::pair<int, double>> out;
        for (const GratingOrder& g : grating_orders(spacing_m, make_medium(frequency_hz))) out.emplace_back(g.order, g.angle_rad);
        return out;
      },
      py::arg("spacing_m"), py::arg("frequency_hz"), "Propagating (order, angle) pairs besides m = 0.");

  m.def(
      "airy_fwhm", [](double beta, double f) { return airy_fwhm(beta, make_medium(f)); }, py::arg("beta"),
      py::arg("frequency_hz"));
  m.def(
      "airy_peak_offset", [](double beta, double f) { return airy_peak_offset(beta, make_medium(f)); },
      py::arg("beta"), py::arg("frequency_hz"));
  m.def(
      "focal_distance",
      [](double x0, double z0, double beta, double f) { return focal_distance(x0, z0, beta, make_medium(f)); },
      py::arg("x0"), py::arg("z0"), py::arg("beta"), py::arg("frequency_hz"));
  m.def(
      "z_max", [](double lx, double beta, double x0, double z0) { return z_max(lx, {beta, x0, z0}); },
      py::arg("aperture_lx"), py::arg("beta"), py::arg("x0") = 0.0, py::arg("z0") = 0.0);
  m.def(
      "fraunhofer_distance", [](double l, double f) { return fraunhofer_distance(l, make_medium(f)); },
      py::arg("aperture"), py::arg("frequency_hz"));

  m.def("list_presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const PresetInfo& p : list_presets()) out.emplace_back(p.name, p.description);
    return out;
  });
  m.def(
      "preset_config", [](const std::string& name) { return preset_config(name); }, py::arg("name"));
  m.def(
      "run_config",
      [](const std::string& text, const std::string& out_dir, bool reduced) {
        Scenario sc = parse_scenario(text);
        if (reduced) sc.reduced = true;
        py::gil_scoped_release nogil;
        return run_scenario(sc, out_dir).manifest_json;
      },
      py::arg("config_json"), py::arg("out_dir"), py::arg("reduced") = false,
      "Runs a scenario config and returns the manifest JSON text.");
  m.def(
      "codeword_csv",
      [](const std::string& text, std::optional<std::string> source, std::size_t freq_index) {
        return codeword_csv(parse_scenario(text), std::move(source), freq_index);
      },
      py::arg("config_json"), py::arg("source") = py::none(), py::arg("frequency_index") = 0);
}
