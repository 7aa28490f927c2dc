// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "bendbeam/error.hpp"
#include "bendbeam/scenario.hpp"

namespace bendbeam {

using nlohmann::json;

namespace {

constexpr double kF = 150e9;

json base(const std::string& name, const std::string& description, json frequencies, json z_list) {
  return {{"units", "SI"},
          {"name", name},
          {"description", description},
          {"frequencies_hz", std::move(frequencies)},
          {"mode", "2d"},
          {"z_list_m", std::move(z_list)},
          {"seed", 1},
          {"sources", json::array()}};
}

json z_range(double a, double b, int count) { return {{"start_m", a}, {"stop_m", b}, {"count", count}}; }

json parabola(double beta, double x0 = 0.0, double z0 = 0.0) {
  return {{"trajectory", {{"kind", "parabolic"}, {"beta_per_m", beta}, {"x0_m", x0}, {"z0_m", z0}}}};
}

json aperture(double x_min, double x_max, double y_width = 1.0) {
  return {{"x_min_m", x_min}, {"x_max_m", x_max}, {"y_width_m", y_width}};
}

json footprint(const std::string& name, json ap, json beams) {
  return {{"name", name}, {"kind", "footprint"}, {"aperture", std::move(ap)}, {"beams", std::move(beams)}};
}

json array_source(const std::string& name, double lx, double beta, double spacing_wavelengths) {
  return {{"name", name},
          {"kind", "array"},
          {"aperture", aperture(-lx, 0.0, lx)},
          {"beams", json::array({parabola(beta)})},
          {"array", {{"spacing_wavelengths", spacing_wavelengths}}}};
}

json airy(const std::string& name, const char* kind, bool closed, double alpha, double x0, double z0) {
  return {{"name", name},
          {"kind", kind},
          {"evaluation", closed ? "closed_form" : "propagate"},
          {"airy", {{"beta_per_m", 0.002}, {"alpha_per_m", alpha}, {"x0_m", x0}, {"z0_m", z0}}}};
}

std::string beta_name(double beta) {
  std::string n = "beta" + std::to_string(beta).substr(0, 5);
  for (char& ch : n) {
    if (ch == '.') ch = 'p';
  }
  return n;
}

json metrics(std::initializer_list<const char*> names) {
  json m{{"enabled", json::array()}};
  for (const char* n : names) m["enabled"].push_back(n);
  return m;
}

json conventional(double x_rx, double z_rx) {
  return footprint("conventional", aperture(-0.05, 0.05, 0.1),
                   json::array({{{"trajectory", {{"kind", "linear"}, {"angle_rad", std::atan2(x_rx, z_rx)}}}}}));
}

json fig1(const std::string& name, const std::string& desc, const char* kind, bool closed, double x0, double z0) {
  json c = base(name, desc, kF, kind == std::string("aaf") ? z_range(0, 25, 101) : z_range(0, 20, 41));
  c["sources"].push_back(airy(kind == std::string("aaf") ? "aaf" : "airy", kind, closed, closed ? 0.0 : 4.0, x0, z0));
  c["metrics"] = kind == std::string("aaf") ? metrics({"on_axis", "field_slices"}) : metrics({"lobe_track", "field_slices"});
  if (closed) c["grid"] = {{"x_range_m", {-3.0, 3.0}}};
  return c;
}

json fig7(const std::string& name, double d_f) {
  constexpr double beta = 0.002, x0 = -0.15;
  const double z0 = d_f - std::sqrt(-x0 / beta);
  json c = base(name, "autofocusing footprint of two mirrored parabolas, d_f = " + std::to_string(static_cast<int>(d_f)) + " m",
                kF, z_range(0, 20, 161));
  json a = parabola(beta, x0, z0);
  json b = a;
  b["mirror"] = true;
  c["sources"].push_back(footprint("aaf", aperture(-0.5, 0.5), json::array({a, b})));
  c["metrics"] = metrics({"on_axis", "lobe_track", "field_slices"});
  return c;
}

json fig8(const std::string& name, const std::string& desc, std::initializer_list<std::array<double, 3>> beams) {
  json c = base(name, desc, kF, z_range(0, 20, 81));
  json list = json::array();
  for (const auto& b : beams) list.push_back(parabola(b[0], b[1], b[2]));
  c["sources"].push_back(footprint("multibeam", aperture(-1.0, 0.0), list));
  c["metrics"] = metrics({"lobe_track", "field_slices"});
  return c;
}

json fig9(const std::string& name, double lx) {
  const double zmax = std::sqrt(lx / 0.002);
  json c = base(name, "trajectory reach, Lx = " + std::to_string(lx).substr(0, 5) + " m", kF, z_range(0, 1.4 * zmax, 57));
  c["sources"].push_back(footprint("bending", aperture(-lx, 0.0, lx), json::array({parabola(0.002)})));
  c["metrics"] = metrics({"lobe_track", "tube_power", "field_slices"});
  return c;
}

json taper_source(const std::string& name, json taper) {
  json ap = aperture(-1.0, 0.0);
  ap["taper"] = std::move(taper);
  return footprint(name, ap, json::array({parabola(0.002)}));
}

const json kExp = {{"kind", "exponential"}, {"alpha_per_m", 4.0}};
const json kGaussCentre = {{"kind", "gaussian"}, {"sigma_m", 0.4}, {"center_m", 0.0}};
const json kGaussMid = {{"kind", "gaussian"}, {"sigma_m", 0.4}, {"center_m", -0.5}};

json fig10(const std::string& name, const std::string& desc, std::vector<std::pair<std::string, json>> sources) {
  json c = base(name, desc, kF, z_range(0, 25, 51));
  for (auto& [n, t] : sources) c["sources"].push_back(taper_source(n, t));
  c["metrics"] = metrics({"lobe_track", "k_content", "field_slices"});
  return c;
}

struct Entry {
  const char* name;
  const char* description;
  std::function<json()> build;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"fig1a", "Airy beam, closed form, untapered",
       [] { return fig1("fig1a", "Airy beam, closed form, untapered", "airy", true, 0.0, 0.0); }},
      {"fig1b", "finite-energy Airy beam (alpha = 4) propagated",
       [] { return fig1("fig1b", "finite-energy Airy beam (alpha = 4) propagated", "airy", false, 0.0, 0.0); }},
      {"fig1c", "abruptly autofocusing beam, closed form",
       [] { return fig1("fig1c", "abruptly autofocusing beam, closed form", "aaf", true, -0.25, 5.0); }},
      {"fig1d", "abruptly autofocusing beam (alpha = 4) propagated",
       [] { return fig1("fig1d", "abruptly autofocusing beam (alpha = 4) propagated", "aaf", false, -0.25, 5.0); }},
      {"fig3a", "conventional beam steered at RX (0.45, 15)",
       [] {
         json c = base("fig3a", "conventional beam steered at RX (0.45, 15)", kF, z_range(0, 20, 81));
         c["sources"].push_back(conventional(0.45, 15.0));
         c["rx_probes"] = json::array({{{"name", "rx"}, {"x_m", 0.45}, {"z_m", 15.0}}});
         c["grid"] = {{"extra_lateral_m", 1.0}};
         c["metrics"] = metrics({"rx_power", "field_slices"});
         return c;
       }},
      {"fig3b", "bending beam, Lx = Ly = 1, beta = 0.002, z0 = 10",
       [] {
         json c = base("fig3b", "bending beam, Lx = Ly = 1, beta = 0.002, z0 = 10", kF, z_range(0, 25, 101));
         c["sources"].push_back(footprint("bending", aperture(-1.0, 0.0), json::array({parabola(0.002, 0.0, 10.0)})));
         c["metrics"] = metrics({"lobe_track", "field_slices"});
         return c;
       }},
      {"fig4", "blockage resilience sweep",
       [] {
         json c = base("fig4", "blockage resilience sweep", kF, json::array({15.0}));
         c["sources"].push_back(footprint("bending", aperture(-1.0, 0.0), json::array({parabola(0.002)})));
         c["sources"].push_back(conventional(0.45, 15.0));
         c["rx_probes"] = json::array({{{"name", "rx"}, {"x_m", 0.45}, {"z_m", 15.0}}});
         c["grid"] = {{"x_range_m", {-3.0, 3.0}}};
         json z = json::array();
         for (int i = 1; i <= 14; ++i) z.push_back(static_cast<double>(i));
         c["metrics"] = metrics({"rx_power", "blockage_sweep"});
         c["metrics"]["blockage"] = {{"rx", "rx"}, {"widths_m", {0.1, 0.2, 0.3}}, {"z_m", z}};
         return c;
       }},
      {"fig5", "dynamic avoidance: three parabolas through RX (0.45, 0.5)",
       [] {
         json c = base("fig5", "dynamic avoidance: three parabolas through RX (0.45, 0.5)", kF, z_range(0, 15, 61));
         const double xr = 0.45, zr = 0.5;
         const std::array<std::array<double, 2>, 3> params{{{0.012, -0.02}, {0.02, -0.2}, {0.03, -0.4}}};
         for (std::size_t i = 0; i < params.size(); ++i) {
           const auto [beta, x0] = params[i];
           const double z0 = zr - std::sqrt((xr - x0) / beta);
           c["sources"].push_back(
               footprint("beam" + std::to_string(i + 1), aperture(-1.0, 0.0), json::array({parabola(beta, x0, z0)})));
         }
         c["rx_probes"] = json::array({{{"name", "rx"}, {"x_m", xr}, {"z_m", zr}}});
         c["grid"] = {{"extra_lateral_m", 0.5}};
         c["metrics"] = metrics({"lobe_track", "rx_power", "field_slices"});
         return c;
       }},
      {"fig6a", "non-paraxial parabola, beta = 0.25, x0 = -0.25, z0 = 1",
       [] {
         json c = base("fig6a", "non-paraxial parabola, beta = 0.25, x0 = -0.25, z0 = 1", kF, z_range(0, 3, 61));
         json b = parabola(0.25, -0.25, 1.0);
         b["regime"] = "nonparaxial";
         c["sources"].push_back(footprint("bending", aperture(-1.0, 0.0), json::array({b})));
         c["grid"] = {{"extra_lateral_m", 1.0}};
         c["metrics"] = metrics({"lobe_track", "field_slices"});
         return c;
       }},
      {"fig6b", "circular caustic of radius 1 m",
       [] {
         json c = base("fig6b", "circular caustic of radius 1 m", kF, z_range(0, 2, 41));
         c["sources"].push_back(footprint("circle", aperture(-1.0, 0.0),
                                          json::array({{{"trajectory", {{"kind", "circular"}, {"radius_m", 1.0}}}}})));
         c["grid"] = {{"extra_lateral_m", 1.0}};
         c["metrics"] = metrics({"lobe_track", "field_slices"});
         return c;
       }},
      {"fig7a", "autofocusing footprint, d_f = 10 m", [] { return fig7("fig7a", 10.0); }},
      {"fig7b", "autofocusing footprint, d_f = 15 m", [] { return fig7("fig7b", 15.0); }},
      {"fig8a", "three beams from one footprint, same curvature",
       [] {
         return fig8("fig8a", "three beams from one footprint, same curvature",
                     {{0.005, 0.0, 10.0}, {0.005, -0.25, 7.5}, {0.005, -0.5, 5.0}});
       }},
      {"fig8b", "three beams from one footprint, mixed curvature",
       [] {
         return fig8("fig8b", "three beams from one footprint, mixed curvature",
                     {{0.005, -0.5, 10.0}, {0.005, 0.25, 5.0}, {0.01, -0.5, 5.0}});
       }},
      {"fig9a", "trajectory reach, Lx = 0.5 m", [] { return fig9("fig9a", 0.5); }},
      {"fig9b", "trajectory reach, Lx = 0.25 m", [] { return fig9("fig9b", 0.25); }},
      {"fig9c", "trajectory reach, Lx = 0.125 m", [] { return fig9("fig9c", 0.125); }},
      {"fig10a", "exponential taper, alpha = 4",
       [] { return fig10("fig10a", "exponential taper, alpha = 4", {{"exponential", kExp}}); }},
      {"fig10b", "Gaussian taper centred on the aperture edge",
       [] { return fig10("fig10b", "Gaussian taper centred on the aperture edge", {{"gaussian_edge", kGaussCentre}}); }},
      {"fig10c", "Gaussian taper centred mid-aperture",
       [] { return fig10("fig10c", "Gaussian taper centred mid-aperture", {{"gaussian_mid", kGaussMid}}); }},
      {"fig10d", "peak power along the lobe for three tapers",
       [] {
         return fig10("fig10d", "peak power along the lobe for three tapers",
                      {{"exponential", kExp}, {"gaussian_edge", kGaussCentre}, {"gaussian_mid", kGaussMid}});
       }},
      {"fig11", "spatial bandwidth and grating orders of an undersampled array",
       [] {
         json c = base("fig11", "spatial bandwidth and grating orders of an undersampled array", kF, json::array({0.0}));
         for (double beta : {0.002, 0.01, 0.05}) {
           const std::string n = beta_name(beta);
           c["sources"].push_back(footprint(n, aperture(-0.5, 0.0, 0.5), json::array({parabola(beta)})));
         }
         c["sources"].push_back(array_source("undersampled", 0.5, 0.002, 2.0));
         c["metrics"] = metrics({"k_content", "order_shares"});
         return c;
       }},
      {"fig12", "phase quantization efficiency",
       [] {
         json c = base("fig12", "phase quantization efficiency", kF, json::array({0.0}));
         c["sources"].push_back(array_source("array", 0.5, 0.002, 0.5));
         c["metrics"] = metrics({"quantization"});
         c["metrics"]["quantization_bits"] = {0, 1, 2, 3, 4, 5, 6};
         return c;
       }},
      {"figA", "random versus periodic sub-array selection",
       [] {
         json c = base("figA", "random versus periodic sub-array selection", kF, json::array({0.0}));
         for (double beta : {0.002, 0.01, 0.05}) {
           const std::string n = beta_name(beta);
           c["sources"].push_back(array_source(n, 0.5, beta, 0.5));
         }
         c["metrics"] = metrics({"subarray"});
         c["metrics"]["subarray_fractions"] = {0.25, 0.5, 0.75};
         c["metrics"]["realizations"] = 100;
         return c;
       }},
      {"fig13", "frequency scaling at 10, 150 and 300 GHz",
       [] {
         json c = base("fig13", "frequency scaling at 10, 150 and 300 GHz", {10e9, 150e9, 300e9},
                       z_range(0, 1.2 * std::sqrt(0.5 / 0.002), 25));
         c["sources"].push_back(footprint("bending", aperture(-0.5, 0.0, 0.5), json::array({parabola(0.002)})));
         c["metrics"] = metrics({"frequency_sweep", "lobe_track"});
         return c;
       }},
      {"figB", "wideband cross-sections at 145, 150 and 155 GHz",
       [] {
         json c = base("figB", "wideband cross-sections at 145, 150 and 155 GHz", {145e9, 150e9, 155e9}, json::array({1.0}));
         for (double beta : {0.002, 0.01, 0.05}) {
           const std::string n = beta_name(beta);
           c["sources"].push_back(footprint(n, aperture(-0.5, 0.0, 0.5), json::array({parabola(beta)})));
         }
         c["metrics"] = metrics({"frequency_sweep"});
         return c;
       }},
  };
  return entries;
}

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> infos = [] {
    std::vector<PresetInfo> out;
    for (const Entry& e : registry()) out.push_back({e.name, e.description});
    return out;
  }();
  return infos;
}

std::string preset_config(std::string_view name) {
  for (const Entry& e : registry()) {
    if (name == e.name) return e.build().dump(2) + "\n";
  }
  std::string names;
  for (const Entry& e : registry()) names += (names.empty() ? "" : ", ") + std::string(e.name);
  throw ValidationError("/preset", "unknown preset \"" + std::string(name) + "\"; valid presets: " + names);
}

}  // namespace bendbeam
