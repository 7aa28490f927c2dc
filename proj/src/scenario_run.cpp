// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bendbeam/analysis.hpp"
#include "bendbeam/error.hpp"
#include "bendbeam/scenario.hpp"
#include "scenario_detail.hpp"

#ifndef BENDBEAM_VERSION
#define BENDBEAM_VERSION "0.0.0"
#endif

namespace bendbeam {

using nlohmann::json;
namespace fs = std::filesystem;

std::string library_version() { return BENDBEAM_VERSION; }

using detail::beam_window;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double equivalent_beta(const BeamConfig& b) {
  switch (b.kind) {
    case TrajectoryKind::parabolic: return b.parabola.beta_per_m;
    case TrajectoryKind::circular: return 1.0 / (2.0 * b.radius_m);
    case TrajectoryKind::numeric: {
      const Grid1D& g = b.numeric->z_grid();
      return std::max(1e-6, 0.5 * std::abs(b.numeric->curvature_at(0.5 * (g.start_m + g.last()))));
    }
    case TrajectoryKind::linear: return 0.0;
  }
  return 0.0;
}

// Caustic x at z in aperture coordinates, or NaN where the beam has no caustic.
double caustic_x(const BeamConfig& b, double z) {
  double x = kNaN;
  switch (b.kind) {
    case TrajectoryKind::parabolic: x = b.parabola.x_at(z); break;
    case TrajectoryKind::circular:
      if (z <= b.radius_m) x = b.radius_m - std::sqrt(b.radius_m * b.radius_m - z * z);
      break;
    case TrajectoryKind::numeric: {
      const Grid1D& g = b.numeric->z_grid();
      if (z >= g.start_m && z <= g.last()) x = b.numeric->x_at(z);
      break;
    }
    case TrajectoryKind::linear: x = z * std::tan(b.angle_rad); break;
  }
  return b.mirror ? -x : x;
}

PhaseProfile unmirrored_profile(const BeamConfig& b, const Medium& medium, const Grid1D& support) {
  switch (b.kind) {
    case TrajectoryKind::parabolic: return synthesize_phase(b.parabola, medium, support, b.regime);
    case TrajectoryKind::circular: return circular_caustic_phase(b.radius_m, medium, support);
    case TrajectoryKind::numeric: return phase_from_trajectory_numeric(*b.numeric, medium, support);
    case TrajectoryKind::linear: break;
  }
  const double kx = medium.wavenumber_rad_per_m * std::sin(b.angle_rad);
  std::vector<double> phase(support.count);
  for (std::size_t i = 0; i < support.count; ++i) phase[i] = kx * support.coordinate(i);
  return PhaseProfile(support, std::move(phase), PhaseRegime::nonparaxial, [kx](double x) { return kx * x; });
}

PhaseProfile beam_profile(const BeamConfig& b, const Medium& medium, const Grid1D& support) {
  if (!b.mirror) return unmirrored_profile(b, medium, support);
  const Grid1D reflected = make_grid(-support.last(), support.step_m, support.count);
  const PhaseProfile p = unmirrored_profile(b, medium, reflected);
  std::vector<double> phase(support.count);
  for (std::size_t i = 0; i < support.count; ++i) phase[i] = p.phase()[support.count - 1 - i];
  return PhaseProfile(support, std::move(phase), p.regime(), [p](double x) { return p.at(-x); });
}

DomainOptions effective_domain(const Scenario& sc, const SourceConfig& s, const Medium& medium) {
  DomainOptions d = sc.domain;
  if (s.kind == SourceKind::array) {
    // element deposition needs at least two nodes per element
    d.step_wavelengths = std::min(d.step_wavelengths, 0.5 * s.array.spacing(medium) / medium.wavelength_m);
  }
  return d;
}

DomainPlan plan_source(const Scenario& sc, const SourceConfig& s, const Medium& medium) {
  const DomainOptions opt = effective_domain(sc, s, medium);
  std::optional<double> y_half;
  if (sc.three_d) y_half = sc.y_half_width_m.value_or(0.5 * s.window.y_width_m + std::max(opt.min_margin_m, 0.1 * s.window.y_width_m));
  if (sc.x_range_m) {
    DomainOptions fixed = opt;
    fixed.padding_factor = 1.0;
    return plan_domain(sc.x_range_m->first, sc.x_range_m->second, y_half, medium, fixed);
  }
  const double z_end = sc.z_list_m.back();
  double lo, hi, margin = opt.min_margin_m;
  if (s.kind == SourceKind::airy || s.kind == SourceKind::aaf) {
    const AiryParams& a = s.airy;
    const double tail = a.alpha_per_m > 0.0 ? 10.0 / a.alpha_per_m : 2.0;
    const double reach = a.x0_m + a.beta_per_m * std::max(a.z0_m * a.z0_m, (z_end - a.z0_m) * (z_end - a.z0_m));
    lo = a.x0_m - tail;
    hi = std::max(a.x0_m, reach);
    if (s.kind == SourceKind::aaf) {
      const double w = std::max(std::abs(lo), std::abs(hi));
      lo = -w;
      hi = w;
    }
    margin = std::max(margin, opt.margin_fwhm * airy_fwhm(a.beta_per_m, medium));
  } else {
    lo = s.window.x_min_m;
    hi = s.window.x_max_m;
    constexpr int kSamples = 512;
    for (const BeamConfig& b : s.beams) {
      const double beta = equivalent_beta(b);
      if (beta > 0.0) margin = std::max(margin, opt.margin_fwhm * airy_fwhm(beta, medium));
      for (int i = 0; i <= kSamples; ++i) {
        const double x = caustic_x(b, z_end * i / kSamples);
        if (std::isfinite(x)) {
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
    }
  }
  return plan_domain(lo - margin - opt.extra_lateral_m, hi + margin + opt.extra_lateral_m, y_half, medium, opt);
}

struct ArraySource {
  ArrayConfig cfg;
  Codeword codeword;
};

ArraySource build_array(const Scenario& sc, const SourceConfig& s, const Medium& medium, std::size_t ny) {
  const double d = s.array.spacing(medium);
  ArrayConfig cfg = array_for_aperture(s.window.aperture_lx(), d, ny);
  cfg.bit_depth = s.array.bit_depth;
  cfg.model = s.array.model;
  if (s.array.active_fraction < 1.0) {
    cfg.active_mask = random_subarray_mask(cfg, s.array.active_fraction, sc.seed);
  } else if (s.array.stride > 1) {
    cfg.active_mask.assign(cfg.nx, false);
    for (std::size_t i = 0; i < cfg.nx; ++i) cfg.active_mask[i] = (cfg.nx - 1 - i) % s.array.stride == 0;
  }
  const double lo = cfg.x_at(0);
  const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(-lo / (0.25 * d))) + 1);
  const Grid1D support = make_grid(lo, -lo / static_cast<double>(n - 1), n);
  std::vector<double> phases = sample_phase(beam_profile(s.beams[0], medium, support), cfg);
  if (cfg.bit_depth) phases = quantize_phases(phases, *cfg.bit_depth);
  Codeword cw = make_codeword(phases, cfg);
  return {std::move(cfg), std::move(cw)};
}

FieldSlice render_source(const Scenario& sc, const SourceConfig& s, const Medium& medium, const DomainPlan& plan) {
  switch (s.kind) {
    case SourceKind::airy: return airy_slice(s.airy, plan.x, 0.0, medium);
    case SourceKind::aaf: return aaf_slice(s.airy, plan.x, 0.0, medium);
    case SourceKind::array: {
      const std::size_t ny = plan.y ? static_cast<std::size_t>(std::floor(s.window.y_width_m / s.array.spacing(medium) + 1e-9)) + 1 : 1;
      const ArraySource a = build_array(sc, s, medium, ny);
      return plan.y ? element_field(a.codeword, a.cfg, s.window, plan.x, *plan.y)
                    : element_field(a.codeword, a.cfg, s.window, plan.x);
    }
    case SourceKind::footprint: break;
  }
  FieldSlice total = plan.y ? FieldSlice::zeros(plan.x, *plan.y, 0.0) : FieldSlice::zeros(plan.x, 0.0);
  std::vector<cplx> acc(total.values().begin(), total.values().end());
  const double default_weight = 1.0 / std::sqrt(static_cast<double>(s.beams.size()));
  for (const BeamConfig& b : s.beams) {
    AmplitudeWindow w = s.window;
    std::tie(w.x_min_m, w.x_max_m) = beam_window(s, b);
    const Grid1D support = aperture_support(w, plan.x);
    const Footprint fp{w, {BeamComponent{b.weight.value_or(cplx(default_weight, 0.0)), beam_profile(b, medium, support), 0.0}}};
    const FieldSlice part = plan.y ? render_footprint(fp, plan.x, *plan.y, medium) : render_footprint(fp, plan.x, medium);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += part.values()[i];
  }
  return total.with_values(std::move(acc));
}

FieldSlice closed_form(const SourceConfig& s, const Grid1D& x, double z, const Medium& medium) {
  return s.kind == SourceKind::aaf ? aaf_slice(s.airy, x, z, medium, true) : airy_slice(s.airy, x, z, medium, true);
}

// Lobe predictions a source supports: (label, predicted peak x(z), fwhm, z range).
struct LobeModel {
  std::size_t beam;
  std::function<double(double)> predicted;
  double fwhm_m;
  double z_lo_m;
  double z_hi_m;
  std::optional<ParabolicTrajectory> parabola;
  bool mirror = false;
};

std::vector<LobeModel> lobe_models(const SourceConfig& s, const Medium& medium) {
  std::vector<LobeModel> out;
  const double inf = std::numeric_limits<double>::infinity();
  if (s.kind == SourceKind::airy) {
    const ParabolicTrajectory t{s.airy.beta_per_m, s.airy.x0_m, s.airy.z0_m};
    const double off = airy_peak_offset(t.beta_per_m, medium);
    out.push_back({0, [t, off](double z) { return t.x_at(z) + off; }, airy_fwhm(t.beta_per_m, medium), -inf, inf, t});
    return out;
  }
  if (s.kind == SourceKind::aaf) return out;
  for (std::size_t i = 0; i < s.beams.size(); ++i) {
    const BeamConfig& b = s.beams[i];
    const double beta = equivalent_beta(b);
    if (!(beta > 0.0)) continue;
    const double off = airy_peak_offset(beta, medium) * (b.mirror ? -1.0 : 1.0);
    LobeModel m{i, [b, off](double z) { return caustic_x(b, z) + off; }, airy_fwhm(beta, medium), -inf, inf, std::nullopt, b.mirror};
    if (b.kind == TrajectoryKind::parabolic) m.parabola = b.parabola;
    if (b.kind == TrajectoryKind::circular) {
      m.z_lo_m = 0.0;
      m.z_hi_m = b.radius_m;
    }
    if (b.kind == TrajectoryKind::numeric) {
      m.z_lo_m = b.numeric->z_grid().start_m;
      m.z_hi_m = b.numeric->z_grid().last();
    }
    out.push_back(std::move(m));
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_slice(const fs::path& dir, const std::string& stem, const FieldSlice& slice, double frequency_hz,
                 const std::string& source, std::vector<std::string>& files) {
  std::string bytes;
  bytes.reserve(slice.values().size() * 8);
  auto put = [&](float v) {
    const auto u = std::bit_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<char>((u >> (8 * b)) & 0xFFu));
  };
  for (const cplx& v : slice.values()) {
    put(static_cast<float>(v.real()));
    put(static_cast<float>(v.imag()));
  }
  write_text(dir / (stem + ".bin"), bytes);
  auto axis = [](const Grid1D& g) { return json{{"start_m", g.start_m}, {"step_m", g.step_m}, {"count", g.count}}; };
  json meta{{"format", "complex64"},
            {"element", "float32 pair (re, im)"},
            {"byte_order", "little"},
            {"layout", "row-major, x fastest"},
            {"x", axis(slice.x_grid())},
            {"z_m", slice.z()},
            {"frequency_hz", frequency_hz},
            {"source", source},
            {"data", stem + ".bin"}};
  if (slice.y_grid()) meta["y"] = axis(*slice.y_grid());
  write_text(dir / (stem + ".json"), meta.dump(2) + "\n");
  files.push_back("slices/" + stem + ".bin");
  files.push_back("slices/" + stem + ".json");
}

std::vector<std::size_t> export_indices(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> out;
  if (cap == 0 || n == 0) return out;
  if (cap >= n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  if (cap == 1) return {n - 1};
  for (std::size_t i = 0; i < cap; ++i) out.push_back(i * (n - 1) / (cap - 1));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// CSV accumulator keyed by file name.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

class Bundle {
 public:
  Table& table(const std::string& file, std::vector<std::string> columns) {
    auto [it, fresh] = tables_.try_emplace(file);
    if (fresh) it->second.columns = std::move(columns);
    return it->second;
  }
  void summary(const std::string& key, double v) { summary_[key] = v; }
  const std::map<std::string, double>& summary() const { return summary_; }

  void flush(const fs::path& dir, std::vector<std::string>& files) const {
    for (const auto& [name, t] : tables_) {
      std::ostringstream out;
      write_csv(out, t.columns, t.rows);
      write_text(dir / name, out.str());
      files.push_back(name);
    }
  }

 private:
  std::map<std::string, Table> tables_;
  std::map<std::string, double> summary_;
};

std::string key(std::size_t si, std::size_t fi, const std::string& what) {
  return "s" + std::to_string(si) + ".f" + std::to_string(fi) + "." + what;
}

json beam_derived(const SourceConfig& s, const BeamConfig& b, const Medium& medium) {
  json j{{"trajectory", b.kind == TrajectoryKind::parabolic ? "parabolic"
                        : b.kind == TrajectoryKind::circular ? "circular"
                        : b.kind == TrajectoryKind::numeric  ? "numeric"
                                                             : "linear"},
         {"mirror", b.mirror}};
  const auto [lo, hi] = beam_window(s, b);
  j["window_m"] = {lo, hi};
  const double beta = equivalent_beta(b);
  if (beta > 0.0) {
    j["x_fwhm_m"] = airy_fwhm(beta, medium);
    j["peak_offset_m"] = airy_peak_offset(beta, medium);
  }
  if (b.kind == TrajectoryKind::parabolic) {
    const ParabolicTrajectory& t = b.parabola;
    j["beta_per_m"] = t.beta_per_m;
    j["x0_m"] = t.x0_m;
    j["z0_m"] = t.z0_m;
    try {
      j["z_max_m"] = z_max(s.window.aperture_lx(), t);
    } catch (const DomainError&) {
    }
    if (-(t.x0_m + airy_peak_offset(t.beta_per_m, medium)) >= 0.0) {
      j["d_f_m"] = focal_distance(t.x0_m, t.z0_m, t.beta_per_m, medium);
    }
    if (s.window.kind == TaperKind::exponential && s.window.alpha_per_m > 0.0) {
      const SpatialBandwidth bw = airy_spatial_bandwidth(t.beta_per_m, s.window.alpha_per_m, medium);
      j["spectral_fwhm_rad_per_m"] = bw.fwhm_rad_per_m;
      j["max_spacing_m"] = bw.max_spacing_m;
    }
  }
  if (b.kind == TrajectoryKind::circular) j["radius_m"] = b.radius_m;
  if (b.kind == TrajectoryKind::linear) j["angle_rad"] = b.angle_rad;
  return j;
}

json source_derived(const SourceConfig& s, const Medium& medium) {
  json j{{"name", s.name}};
  if (s.kind == SourceKind::airy || s.kind == SourceKind::aaf) {
    const AiryParams& a = s.airy;
    j["x_fwhm_m"] = airy_fwhm(a.beta_per_m, medium);
    j["peak_offset_m"] = airy_peak_offset(a.beta_per_m, medium);
    if (s.kind == SourceKind::aaf && -(a.x0_m + airy_peak_offset(a.beta_per_m, medium)) >= 0.0)
      j["d_f_m"] = focal_distance(a.x0_m, a.z0_m, a.beta_per_m, medium);
    if (a.alpha_per_m > 0.0) {
      const SpatialBandwidth bw = airy_spatial_bandwidth(a.beta_per_m, a.alpha_per_m, medium);
      j["spectral_fwhm_rad_per_m"] = bw.fwhm_rad_per_m;
      j["max_spacing_m"] = bw.max_spacing_m;
    }
    return j;
  }
  j["aperture_lx_m"] = s.window.aperture_lx();
  j["z_F_m"] = fraunhofer_distance(s.window.aperture_lx(), medium);
  j["beams"] = json::array();
  for (const BeamConfig& b : s.beams) j["beams"].push_back(beam_derived(s, b, medium));
  if (s.kind == SourceKind::array) {
    const double d = s.array.spacing(medium);
    j["element_spacing_m"] = d;
    j["element_count_x"] = array_for_aperture(s.window.aperture_lx(), d).nx;
    json orders = json::array();
    for (const GratingOrder& o : grating_orders(d, medium)) {
      orders.push_back({{"order", o.order}, {"angle_rad", o.angle_rad}, {"kx_rad_per_m", o.kx_rad_per_m}});
    }
    j["grating_orders"] = orders;
  }
  return j;
}

ArrayScenario efficiency_setup(const Scenario& sc, const SourceConfig& s, const Medium& medium) {
  const BeamConfig& b = s.beams[0];
  const std::optional<double> spacing =
      s.kind == SourceKind::array ? std::optional<double>(s.array.spacing(medium)) : std::nullopt;
  ArrayScenario a = make_array_scenario(medium, s.window, b.parabola, spacing, effective_domain(sc, s, medium).step_wavelengths);
  a.regime = b.regime;
  a.tube_fwhm = sc.metrics.tube_fwhm;
  if (sc.metrics.reference_z_m) a.z_ref_m = *sc.metrics.reference_z_m;
  if (s.kind == SourceKind::array) a.spacing_m = s.array.spacing(medium);
  return a;
}

struct SourceRun {
  const Scenario& sc;
  const SourceConfig& s;
  std::size_t si;
  std::size_t fi;
  const Medium& medium;
  const DomainPlan& plan;
  const fs::path& slice_dir;
  Bundle& bundle;
  json& notes;
  std::vector<std::string>& files;
};

void run_source(const SourceRun& r) {
  const Scenario& sc = r.sc;
  const SourceConfig& s = r.s;
  const MetricSettings& ms = sc.metrics;
  const double f = r.medium.frequency_hz;
  const double si = static_cast<double>(r.si);
  const PropagationOptions popt{true, sc.border};

  const FieldSlice source = render_source(sc, s, r.medium, r.plan);
  std::optional<AngularSpectrumEngine> engine;
  if (!s.closed_form) engine.emplace(source, r.medium, popt);

  auto slices_at = [&](const std::vector<double>& z, const std::vector<Blocker>& blockers,
                       const std::function<void(const FieldSlice&)>& sink) {
    if (engine) {
      engine->scan_each(z, blockers, sink);
    } else {
      for (double zz : z) sink(closed_form(s, r.plan.x, zz, r.medium));
    }
  };

  // Main z scan: keep the y = 0 rows, export selected planes.
  std::vector<FieldSlice> rows;
  std::vector<double> border;
  const auto exported = ms.has("field_slices") ? export_indices(sc.z_list_m.size(), ms.max_exported_slices)
                                               : std::vector<std::size_t>{};
  std::size_t zi = 0;
  slices_at(sc.z_list_m, sc.blockers, [&](const FieldSlice& slice) {
    if (std::binary_search(exported.begin(), exported.end(), zi)) {
      write_slice(r.slice_dir, s.name + "_f" + std::to_string(r.fi) + "_z" + std::to_string(zi), slice, f, s.name, r.files);
    }
    border.push_back(border_power_fraction(slice, popt.border_fraction));
    rows.push_back(slice.is_2d() ? slice.row(0.0) : slice);
    ++zi;
  });
  r.bundle.summary(key(r.si, r.fi, "max_border_fraction"), *std::max_element(border.begin(), border.end()));

  const std::vector<LobeModel> models = lobe_models(s, r.medium);

  if (ms.has("lobe_track")) {
    Table& t = r.bundle.table("lobe_track.csv", {"source_index", "beam_index", "frequency_hz", "z_m", "x_peak_m",
                                                 "peak_intensity", "peak_relative", "fwhm_m", "predicted_x_m",
                                                 "deviation_m", "deviation_over_fwhm", "lost"});
    if (models.empty()) r.notes["lobe_track"].push_back(s.name + ": no caustic to track");
    for (const LobeModel& m : models) {
      std::vector<FieldSlice> in_range;
      for (const FieldSlice& row : rows) {
        if (row.z() >= m.z_lo_m && row.z() <= m.z_hi_m) in_range.push_back(row);
      }
      if (in_range.empty()) continue;
      const LobeTrack track = track_lobe(in_range, m.predicted, m.fwhm_m);
      double peak_max = 0.0;
      for (const LobeSample& x : track.samples) peak_max = std::max(peak_max, x.peak_intensity);
      for (const LobeSample& x : track.samples) {
        t.rows.push_back({si, static_cast<double>(m.beam), f, x.z_m, x.x_peak_m, x.peak_intensity,
                          peak_max > 0.0 ? x.peak_intensity / peak_max : 0.0, x.fwhm_m, x.predicted_x_m, x.deviation_m,
                          x.deviation_m / m.fwhm_m, x.lost ? 1.0 : 0.0});
      }
      const std::string b = "b" + std::to_string(m.beam) + ".";
      r.bundle.summary(key(r.si, r.fi, b + "peak_relative_at_last_z"),
                       peak_max > 0.0 ? track.samples.back().peak_intensity / peak_max : 0.0);
      double zhi = sc.z_list_m.back();
      if (m.parabola && s.kind != SourceKind::airy) {
        try {
          zhi = 0.9 * z_max(s.window.aperture_lx(), *m.parabola);
        } catch (const DomainError&) {
        }
      }
      double worst = 0.0, lost = 0.0;
      for (const LobeSample& x : track.samples) {
        if (x.z_m <= 0.0 || x.z_m > zhi) continue;
        if (x.lost) lost += 1.0;
        else worst = std::max(worst, std::abs(x.deviation_m));
      }
      r.bundle.summary(key(r.si, r.fi, b + "max_deviation_over_fwhm"), worst / m.fwhm_m);
      r.bundle.summary(key(r.si, r.fi, b + "lost_samples"), lost);
    }
  }

  if (ms.has("tube_power")) {
    Table& t = r.bundle.table("tube_power.csv", {"source_index", "beam_index", "frequency_hz", "z_m", "tube_power",
                                                 "total_power", "tube_fraction"});
    for (const LobeModel& m : models) {
      for (const FieldSlice& row : rows) {
        if (row.z() < m.z_lo_m || row.z() > m.z_hi_m) continue;
        const double tube = beam_tube_power(row, m.predicted(row.z()), ms.tube_fwhm * m.fwhm_m);
        const double tot = total_power(row);
        t.rows.push_back({si, static_cast<double>(m.beam), f, row.z(), tube, tot, tot > 0.0 ? tube / tot : 0.0});
      }
    }
  }

  if (ms.has("on_axis")) {
    Table& t = r.bundle.table("on_axis.csv", {"source_index", "frequency_hz", "z_m", "intensity"});
    std::vector<double> z, v;
    for (const FieldSlice& row : rows) {
      const double i0 = std::norm(row.at(row.x_grid().nearest_index(0.0)));
      t.rows.push_back({si, f, row.z(), i0});
      z.push_back(row.z());
      v.push_back(i0);
    }
    const auto it = std::max_element(v.begin(), v.end());
    std::size_t k = static_cast<std::size_t>(it - v.begin());
    double zpk = z[k];
    if (k > 0 && k + 1 < v.size()) {
      const double den = v[k - 1] - 2.0 * v[k] + v[k + 1];
      if (den < 0.0 && std::abs(z[k + 1] - 2.0 * z[k] + z[k - 1]) < 1e-9 * std::max(1.0, z[k])) {
        zpk += 0.5 * (z[k + 1] - z[k]) * (v[k - 1] - v[k + 1]) / den;
      }
    }
    r.bundle.summary(key(r.si, r.fi, "on_axis_peak_z_m"), zpk);
  }

  if (ms.has("rx_power")) {
    Table& t = r.bundle.table("rx_power.csv", {"source_index", "probe_index", "frequency_hz", "x_m", "y_m", "z_m",
                                               "side_m", "power", "power_unblocked"});
    for (std::size_t pi = 0; pi < sc.rx_probes.size(); ++pi) {
      const RxProbe& p = sc.rx_probes[pi];
      std::vector<Blocker> before;
      for (const Blocker& b : sc.blockers) {
        if (b.z_m <= p.z_m) before.push_back(b);
      }
      const Window w = sc.three_d ? rx_window(p.x_m, p.side_m, p.y_m) : rx_window(p.x_m, p.side_m);
      double with = 0.0, without = 0.0;
      slices_at({p.z_m}, before, [&](const FieldSlice& x) { with = window_power(x, w); });
      if (before.empty()) {
        without = with;
      } else {
        slices_at({p.z_m}, {}, [&](const FieldSlice& x) { without = window_power(x, w); });
      }
      t.rows.push_back({si, static_cast<double>(pi), f, p.x_m, p.y_m, p.z_m, p.side_m, with, without});
      r.bundle.summary(key(r.si, r.fi, "rx." + p.name + ".power"), with);
    }
  }

  if (ms.has("blockage_sweep")) {
    Table& t = r.bundle.table("blockage.csv", {"source_index", "frequency_hz", "width_m", "z_blocker_m",
                                               "x_blocker_m", "ratio"});
    if (!engine) {
      r.notes["blockage_sweep"].push_back(s.name + ": closed-form source skipped");
    } else {
      const RxProbe& p = sc.probe(ms.blockage->rx);
      const Window w = sc.three_d ? rx_window(p.x_m, p.side_m, p.y_m) : rx_window(p.x_m, p.side_m);
      const FieldSlice free = engine->propagate(p.z_m);
      for (double width : ms.blockage->widths_m) {
        double best = 0.0;
        for (double zb : ms.blockage->z_m) {
          const Blocker b{zb, p.x_m * zb / p.z_m, p.y_m * zb / p.z_m, width};
          const FieldSlice blocked = engine->scan({p.z_m}, {b}).front();
          const double ratio = blockage_ratio(blocked, free, w);
          best = std::max(best, ratio);
          t.rows.push_back({si, f, width, zb, b.center_x_m, ratio});
        }
        std::ostringstream wk;
        wk << "blockage.w" << width << ".max_ratio";
        r.bundle.summary(key(r.si, r.fi, wk.str()), best);
      }
    }
  }

  if (ms.has("k_content")) {
    Table& t = r.bundle.table("k_content.csv", {"source_index", "frequency_hz", "kx_rad_per_m", "kx_over_k", "power"});
    const FieldSlice row = source.is_2d() ? source.row(0.0) : source;
    const KContent kc = k_content(row, r.medium);
    const double k = r.medium.wavenumber_rad_per_m;
    for (std::size_t i = 0; i < kc.kx_rad_per_m.size(); ++i) {
      if (std::abs(kc.kx_rad_per_m[i]) <= k) t.rows.push_back({si, f, kc.kx_rad_per_m[i], kc.kx_rad_per_m[i] / k, kc.power[i]});
    }
    r.bundle.summary(key(r.si, r.fi, "k_fwhm_rad_per_m"), kc.fwhm_rad_per_m);
    r.bundle.summary(key(r.si, r.fi, "k_peak_rad_per_m"), kc.peak_kx_rad_per_m);
  }

  if (ms.has("order_shares")) {
    if (s.kind != SourceKind::array) {
      r.notes["order_shares"].push_back(s.name + ": not an array source");
    } else {
      Table& t = r.bundle.table("order_shares.csv", {"source_index", "frequency_hz", "order", "angle_rad", "share"});
      const double d = s.array.spacing(r.medium);
      const auto orders = grating_orders(d, r.medium);
      const FieldSlice row = source.is_2d() ? source.row(0.0) : source;
      for (const OrderShare& o : order_shares(row, r.medium, d)) {
        double angle = kNaN;
        for (const GratingOrder& g : orders) {
          if (g.order == o.order) angle = g.angle_rad;
        }
        t.rows.push_back({si, f, static_cast<double>(o.order), angle, o.share});
        r.bundle.summary(key(r.si, r.fi, "order" + std::to_string(o.order) + ".share"), o.share);
      }
    }
  }

  if (ms.has("quantization")) {
    Table& t = r.bundle.table("quantization.csv", {"source_index", "frequency_hz", "bit_depth", "efficiency"});
    const ArrayScenario a = efficiency_setup(sc, s, r.medium);
    for (int bits : ms.quantization_bits) {
      const EfficiencyReport e = quantization_efficiency(a, bits > 0 ? std::optional<int>(bits) : std::nullopt);
      t.rows.push_back({si, f, static_cast<double>(bits), e.value});
      r.bundle.summary(key(r.si, r.fi, "quantization.n" + std::to_string(bits)), e.value);
    }
  }

  if (ms.has("subarray")) {
    Table& t = r.bundle.table("subarray.csv", {"source_index", "frequency_hz", "fraction_active", "periodic", "mean",
                                               "std_dev", "count"});
    const ArrayScenario a = efficiency_setup(sc, s, r.medium);
    for (double fr : ms.subarray_fractions) {
      const EfficiencyReport e = subarray_efficiency(a, fr, ms.realizations, sc.seed);
      t.rows.push_back({si, f, fr, 0.0, e.mean, e.std_dev, static_cast<double>(e.count)});
      std::ostringstream k;
      k << "subarray.random" << fr << ".mean";
      r.bundle.summary(key(r.si, r.fi, k.str()), e.mean);
    }
    const EfficiencyReport p = periodic_subarray_efficiency(a, ms.periodic_stride);
    t.rows.push_back({si, f, 1.0 / static_cast<double>(ms.periodic_stride), 1.0, p.mean, 0.0, 1.0});
    r.bundle.summary(key(r.si, r.fi, "subarray.periodic"), p.mean);
  }
}

void run_frequency_sweep(const Scenario& sc, Bundle& bundle) {
  for (std::size_t si = 0; si < sc.sources.size(); ++si) {
    const SourceConfig& s = sc.sources[si];
    BeamSetup setup;
    setup.window = s.window;
    setup.traj = s.beams[0].parabola;
    setup.regime = s.beams[0].regime;
    setup.domain = sc.domain;
    setup.propagation = PropagationOptions{true, sc.border};
    const auto points = frequency_sweep(setup, sc.frequencies_hz, sc.metrics.cross_section_z_m);
    Table& t = bundle.table("frequency_sweep.csv", {"source_index", "frequency_hz", "fraunhofer_m", "z_max_m",
                                                    "fwhm_m", "x_peak_m", "deviation_m", "deviation_over_fwhm"});
    Table& c = bundle.table("cross_sections.csv", {"source_index", "frequency_hz", "z_m", "x_m", "intensity_relative"});
    for (std::size_t fi = 0; fi < points.size(); ++fi) {
      const FrequencyPoint& p = points[fi];
      const double sd = static_cast<double>(si);
      t.rows.push_back({sd, p.frequency_hz, p.fraunhofer_m, p.z_max_m, p.fwhm_m, p.x_peak_at_z_max_m,
                        p.deviation_at_z_max_m, p.deviation_at_z_max_m / p.fwhm_m});
      bundle.summary(key(si, fi, "sweep.deviation_over_fwhm"), p.deviation_at_z_max_m / p.fwhm_m);
      const FieldSlice row = p.cross_section.is_2d() ? p.cross_section.row(0.0) : p.cross_section;
      const std::vector<double> in = row.intensity();
      const double peak = *std::max_element(in.begin(), in.end());
      const std::size_t ipk = static_cast<std::size_t>(std::max_element(in.begin(), in.end()) - in.begin());
      bundle.summary(key(si, fi, "sweep.cross_section_peak_x_m"), row.x_grid().coordinate(ipk));
      const double center = setup.traj.x_at(row.z());
      const double half = 20.0 * p.fwhm_m;
      for (std::size_t i = 0; i < in.size(); ++i) {
        const double x = row.x_grid().coordinate(i);
        if (std::abs(x - center) <= half) c.rows.push_back({sd, p.frequency_hz, row.z(), x, peak > 0.0 ? in[i] / peak : 0.0});
      }
    }
  }
}

}  // namespace

RunSummary run_scenario(const Scenario& input, const fs::path& out_dir) {
  Scenario sc = input;
  if (sc.reduced) apply_reduced_resolution(sc);

  // Plan every domain first so resource errors surface before any field is built.
  std::vector<std::vector<DomainPlan>> plans;
  for (double f : sc.frequencies_hz) {
    const Medium medium = make_medium(f);
    std::vector<DomainPlan> row;
    for (const SourceConfig& s : sc.sources) row.push_back(plan_source(sc, s, medium));
    plans.push_back(std::move(row));
  }
  for (std::size_t si = 0; si < sc.sources.size(); ++si) {
    const SourceConfig& s = sc.sources[si];
    if (s.kind == SourceKind::footprint || s.kind == SourceKind::array) {
      for (std::size_t bi = 0; bi < s.beams.size(); ++bi) {
        AmplitudeWindow w = s.window;
        std::tie(w.x_min_m, w.x_max_m) = beam_window(s, s.beams[bi]);
        for (const auto& row : plans) {
          try {
            aperture_support(w, row[si].x);
          } catch (const DomainError& e) {
            throw ValidationError("/sources/" + std::to_string(si) + "/beams/" + std::to_string(bi), e.what());
          }
        }
      }
    }
  }

  fs::create_directories(out_dir);
  const fs::path slice_dir = out_dir / "slices";
  if (sc.metrics.has("field_slices")) fs::create_directories(slice_dir);

  Bundle bundle;
  json notes = json::object();
  std::vector<std::string> files;
  json derived = json::array();
  json grids = json::array();
  for (std::size_t fi = 0; fi < sc.frequencies_hz.size(); ++fi) {
    const Medium medium = make_medium(sc.frequencies_hz[fi]);
    json d{{"frequency_hz", medium.frequency_hz},
           {"wavelength_m", medium.wavelength_m},
           {"wavenumber_rad_per_m", medium.wavenumber_rad_per_m},
           {"sources", json::array()}};
    for (std::size_t si = 0; si < sc.sources.size(); ++si) {
      d["sources"].push_back(source_derived(sc.sources[si], medium));
      const DomainPlan& plan = plans[fi][si];
      json g{{"source", sc.sources[si].name},
             {"frequency_hz", medium.frequency_hz},
             {"x", {{"start_m", plan.x.start_m}, {"step_m", plan.x.step_m}, {"count", plan.x.count}}},
             {"memory_bytes", plan.memory_bytes}};
      if (plan.y) g["y"] = {{"start_m", plan.y->start_m}, {"step_m", plan.y->step_m}, {"count", plan.y->count}};
      grids.push_back(g);
      run_source({sc, sc.sources[si], si, fi, medium, plan, slice_dir, bundle, notes, files});
    }
    derived.push_back(d);
  }
  if (sc.metrics.has("frequency_sweep")) run_frequency_sweep(sc, bundle);

  bundle.flush(out_dir, files);

  json summary = json::object();
  for (const auto& [k, v] : bundle.summary()) summary[k] = std::isfinite(v) ? json(v) : json(nullptr);
  json sources = json::array();
  for (const SourceConfig& s : sc.sources) sources.push_back(s.name);

  files.push_back("manifest.json");
  std::sort(files.begin(), files.end());
  json manifest{{"tool", "bendbeam"},
                {"version", library_version()},
                {"config", json::parse(sc.config_json)},
                {"run",
                 {{"seed", sc.seed},
                  {"precision", sc.reduced ? "reduced" : "full"},
                  {"step_wavelengths", sc.domain.step_wavelengths},
                  {"z_list_m", sc.z_list_m},
                  {"realizations", sc.metrics.realizations}}},
                {"source_index", sources},
                {"derived", derived},
                {"grids", grids},
                {"summary", summary},
                {"notes", notes},
                {"files", files}};
  const std::string text = manifest.dump(2) + "\n";
  write_text(out_dir / "manifest.json", text);
  return {out_dir, files, text};
}

RunSummary run_sweep(std::string_view json_text, const fs::path& out_dir, bool reduced,
                     std::optional<std::uint64_t> seed) {
  Scenario base = parse_scenario(json_text);
  if (seed) base.seed = *seed;
  if (reduced) base.reduced = true;
  if (!base.sweep) {
    if (!base.metrics.has("frequency_sweep")) base.metrics.enabled.push_back("frequency_sweep");
    return run_scenario(base, out_dir);
  }

  json doc = json::parse(json_text);
  const json::json_pointer ptr(base.sweep->pointer);
  doc.erase("sweep");
  std::vector<std::map<std::string, double>> summaries;
  std::vector<double> values;
  std::vector<std::string> files;
  for (std::size_t i = 0; i < base.sweep->values.size(); ++i) {
    json variant = doc;
    const json v = json::parse(base.sweep->values[i]);
    variant[ptr] = v;
    Scenario sc = parse_scenario(variant.dump());
    sc.seed = base.seed;
    sc.reduced = base.reduced;
    const std::string sub = "run_" + std::to_string(i);
    const RunSummary rs = run_scenario(sc, out_dir / sub);
    for (const std::string& f : rs.files) files.push_back(sub + "/" + f);
    std::map<std::string, double> flat;
    const json manifest = json::parse(rs.manifest_json);
    for (const auto& [k, x] : manifest.at("summary").items()) flat[k] = x.is_number() ? x.get<double>() : kNaN;
    summaries.push_back(std::move(flat));
    values.push_back(v.is_number() ? v.get<double>() : kNaN);
  }
  std::vector<std::string> keys;
  for (const auto& s : summaries) {
    for (const auto& [k, v] : s) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::string> columns{"run_index", "value"};
  columns.insert(columns.end(), keys.begin(), keys.end());
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    std::vector<double> r{static_cast<double>(i), values[i]};
    for (const std::string& k : keys) {
      auto it = summaries[i].find(k);
      r.push_back(it == summaries[i].end() ? kNaN : it->second);
    }
    rows.push_back(std::move(r));
  }
  std::ostringstream csv;
  write_csv(csv, columns, rows);
  write_text(out_dir / "sweep_summary.csv", csv.str());
  files.push_back("sweep_summary.csv");
  json index{{"pointer", base.sweep->pointer}, {"values", json::array()}, {"runs", json::array()}};
  for (std::size_t i = 0; i < base.sweep->values.size(); ++i) {
    index["values"].push_back(json::parse(base.sweep->values[i]));
    index["runs"].push_back("run_" + std::to_string(i));
  }
  const std::string text = index.dump(2) + "\n";
  write_text(out_dir / "sweep.json", text);
  files.push_back("sweep.json");
  std::sort(files.begin(), files.end());
  return {out_dir, files, text};
}

std::string codeword_csv(const Scenario& sc, std::optional<std::string> source, std::size_t frequency_index) {
  if (frequency_index >= sc.frequencies_hz.size()) throw ValidationError("/frequencies_hz", "frequency index out of range");
  const SourceConfig* chosen = nullptr;
  std::size_t index = 0;
  for (std::size_t i = 0; i < sc.sources.size(); ++i) {
    const SourceConfig& s = sc.sources[i];
    if (source ? s.name == *source : s.kind == SourceKind::array) {
      chosen = &s;
      index = i;
      break;
    }
  }
  if (!chosen) throw ValidationError("/sources", source ? "no source named \"" + *source + "\"" : "no array source");
  if (chosen->kind != SourceKind::array)
    throw ValidationError("/sources/" + std::to_string(index) + "/kind", "codeword export needs an array source");
  const Medium medium = make_medium(sc.frequencies_hz[frequency_index]);
  const ArraySource a = build_array(sc, *chosen, medium, 1);
  std::ostringstream out;
  write_codeword_csv(out, a.codeword, a.cfg);
  return out.str();
}

namespace detail {

std::pair<double, double> beam_window(const SourceConfig& s, const BeamConfig& b) {
  double lo = std::max(s.window.x_min_m, b.x_min_m.value_or(s.window.x_min_m));
  double hi = std::min(s.window.x_max_m, b.x_max_m.value_or(s.window.x_max_m));
  if (b.kind == TrajectoryKind::parabolic) {
    const double edge = b.parabola.x0_m + b.parabola.beta_per_m * b.parabola.z0_m * b.parabola.z0_m;
    if (b.mirror) lo = std::max(lo, -edge);
    else hi = std::min(hi, edge);
  } else if (b.kind == TrajectoryKind::circular) {
    if (b.mirror) lo = std::max(lo, 0.0);
    else hi = std::min(hi, 0.0);
  }
  return {lo, hi};
}

}  // namespace detail

}  // namespace bendbeam
