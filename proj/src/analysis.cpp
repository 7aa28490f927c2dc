// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <numeric>
#include <ostream>
#include <sstream>

#include "bendbeam/error.hpp"

namespace bendbeam {
namespace {

// Half-maximum crossing walking from `peak` in direction `dir`, linearly
// interpolated; stops at the grid end.
double half_crossing(const std::vector<double>& I, const Grid1D& g, std::size_t peak, int dir) {
  const double half = 0.5 * I[peak];
  auto i = static_cast<long long>(peak);
  const auto n = static_cast<long long>(I.size());
  while (i + dir >= 0 && i + dir < n) {
    const long long j = i + dir;
    if (I[static_cast<std::size_t>(j)] < half) {
      const double a = I[static_cast<std::size_t>(i)], b = I[static_cast<std::size_t>(j)];
      const double t = (a - half) / (a - b);
      return g.coordinate(static_cast<std::size_t>(i)) + dir * t * g.step_m;
    }
    i = j;
  }
  return g.coordinate(static_cast<std::size_t>(i));
}

}  // namespace

double LobeTrack::max_abs_deviation(double z_lo_m, double z_hi_m) const {
  double worst = 0.0;
  for (const LobeSample& s : samples) {
    if (s.z_m < z_lo_m || s.z_m > z_hi_m) continue;
    if (s.lost) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(s.deviation_m));
  }
  return worst;
}

LobeSample locate_peak(const FieldSlice& slice, double lo_m, double hi_m) {
  const FieldSlice row = slice.row(0.0);
  const Grid1D& g = row.x_grid();
  const std::vector<double> I = row.intensity();
  std::size_t first = g.count, last = 0;
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.coordinate(i);
    if (x >= lo_m && x <= hi_m) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == g.count) throw DomainError("peak search window misses the grid");
  std::size_t best = first;
  for (std::size_t i = first; i <= last; ++i) {
    if (I[i] > I[best]) best = i;
  }
  LobeSample s{};
  s.z_m = slice.z();
  s.lost = (best == first || best == last) && last > first;
  double x = g.coordinate(best), peak = I[best];
  if (best > 0 && best + 1 < g.count) {
    const double a = I[best - 1], b = I[best], c = I[best + 1];
    const double den = a - 2.0 * b + c;
    if (den < 0.0) {
      const double d = std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
      x += d * g.step_m;
      peak = b - 0.25 * (a - c) * d;
    }
  }
  s.x_peak_m = x;
  s.peak_intensity = peak;
  s.fwhm_m = peak > 0.0 ? half_crossing(I, g, best, +1) - half_crossing(I, g, best, -1) : 0.0;
  return s;
}

LobeTrack track_lobe(const std::vector<FieldSlice>& slices, const std::function<double(double)>& predicted_x,
                     double fwhm_m, double search_fwhm) {
  if (!(fwhm_m > 0.0) || !(search_fwhm > 0.0)) throw DomainError("lobe tracking needs a positive window");
  LobeTrack track;
  track.samples.reserve(slices.size());
  for (const FieldSlice& s : slices) {
    const double p = predicted_x(s.z());
    const double half = search_fwhm * fwhm_m;
    LobeSample sample = locate_peak(s, p - half, p + half);
    sample.predicted_x_m = p;
    sample.deviation_m = sample.x_peak_m - p;
    track.samples.push_back(sample);
  }
  return track;
}

LobeTrack track_main_lobe(const std::vector<FieldSlice>& slices, const ParabolicTrajectory& traj,
                          const Medium& medium, double search_fwhm) {
  const double offset = airy_peak_offset(traj.beta_per_m, medium);
  return track_lobe(
      slices, [&](double z) { return traj.x_at(z) + offset; }, airy_fwhm(traj.beta_per_m, medium), search_fwhm);
}

double beam_tube_power(const FieldSlice& slice, double center_x_m, double half_width_m) {
  if (!(half_width_m >= 0.0)) throw DomainError("tube half-width must be non-negative");
  return window_power(slice, Window{center_x_m, 2.0 * half_width_m});
}

double beam_tube_power(const FieldSlice& slice, const ParabolicTrajectory& traj, const Medium& medium,
                       double tube_fwhm) {
  const double c = traj.x_at(slice.z()) + airy_peak_offset(traj.beta_per_m, medium);
  return beam_tube_power(slice, c, tube_fwhm * airy_fwhm(traj.beta_per_m, medium));
}

Window rx_window(double x_m, double side_m, double y_m) { return Window{x_m, side_m, y_m, side_m}; }

double blockage_ratio(const FieldSlice& with_blocker, const FieldSlice& without_blocker, const Window& rx) {
  const double den = window_power(without_blocker, rx);
  if (!(den > 0.0)) throw DomainError("blockage ratio undefined: no power at the receiver without the blocker");
  return window_power(with_blocker, rx) / den;
}

EfficiencyReport summarize(std::string metric, const std::vector<double>& values) {
  EfficiencyReport r;
  r.metric = std::move(metric);
  r.count = values.size();
  if (values.empty()) return r;
  // shifted by the first value: identical inputs give their value and std 0 exactly
  const double v0 = values.front();
  double shift = 0.0;
  for (double v : values) shift += v - v0;
  r.mean = v0 + shift / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.std_dev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  r.value = r.mean;
  return r;
}

ArrayScenario make_array_scenario(const Medium& medium, const AmplitudeWindow& window,
                                  const ParabolicTrajectory& traj, std::optional<double> spacing_m,
                                  double step_wavelengths) {
  ArrayScenario s;
  s.medium = medium;
  s.window = window;
  s.traj = traj;
  s.spacing_m = spacing_m.value_or(0.5 * medium.wavelength_m);
  s.z_ref_m = 0.5 * z_max(window.aperture_lx(), traj);
  DomainOptions dom;
  dom.step_wavelengths = step_wavelengths;
  dom.extra_lateral_m = window.aperture_lx();
  s.grid = auto_domain(window, traj, s.z_ref_m, medium, dom).x;
  s.propagation.border = BorderPolicy::report;
  return s;
}

std::vector<double> scenario_phases(const ArrayScenario& s, const ArrayConfig& cfg) {
  const double lo = cfg.x_at(0), hi = cfg.x_at(cfg.nx - 1);
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / (0.25 * cfg.spacing_m))) + 1;
  const Grid1D support = make_grid(lo, (hi - lo) / static_cast<double>(std::max<std::size_t>(count - 1, 1)),
                                   std::max<std::size_t>(count, 2));
  return sample_phase(synthesize_phase(s.traj, s.medium, support, s.regime), cfg);
}

ArrayMeasurement measure_array(const ArrayScenario& s, const ArrayConfig& cfg, const std::vector<double>& phases) {
  const FieldSlice source = element_field(make_codeword(phases, cfg), cfg, s.window, s.grid);
  const AngularSpectrumEngine engine(source, s.medium, s.propagation);
  const FieldSlice at_ref = engine.propagate(s.z_ref_m);
  return {beam_tube_power(at_ref, s.traj, s.medium, s.tube_fwhm), engine.source_spectrum().propagating_power()};
}

namespace {

ArrayConfig base_array(const ArrayScenario& s) {
  ArrayConfig cfg = array_for_aperture(s.window.aperture_lx(), s.spacing_m);
  validate(cfg);
  return cfg;
}

}  // namespace

EfficiencyReport quantization_efficiency(const ArrayScenario& s, std::optional<int> bit_depth) {
  if (!bit_depth) return summarize("quantization", {1.0});
  ArrayConfig cfg = base_array(s);
  const std::vector<double> phases = scenario_phases(s, cfg);
  const double reference = measure_array(s, cfg, phases).tube_power;
  if (!(reference > 0.0)) throw DomainError("continuous-phase beam carries no tube power");
  cfg.bit_depth = bit_depth;
  const double quantized = measure_array(s, cfg, quantize_phases(phases, *bit_depth)).tube_power;
  return summarize("quantization", {quantized / reference});
}

EfficiencyReport subarray_efficiency(const ArrayScenario& s, double fraction_active, std::size_t realizations,
                                     std::uint64_t seed) {
  if (realizations == 0) throw DomainError("need at least one realization");
  ArrayConfig cfg = base_array(s);
  const std::vector<double> phases = scenario_phases(s, cfg);
  std::vector<double> values;
  values.reserve(realizations);
  for (std::size_t i = 0; i < realizations; ++i) {
    cfg.active_mask = random_subarray_mask(cfg, fraction_active, seed + i);
    const ArrayMeasurement m = measure_array(s, cfg, phases);
    values.push_back(m.tube_power / m.radiated_power);
  }
  return summarize("subarray_random", values);
}

EfficiencyReport periodic_subarray_efficiency(const ArrayScenario& s, std::size_t stride) {
  if (stride == 0) throw DomainError("stride must be positive");
  ArrayConfig cfg = base_array(s);
  const std::vector<double> phases = scenario_phases(s, cfg);
  cfg.active_mask.assign(cfg.nx, false);
  // Keep the column at x = 0 and every stride-th one to its left.
  for (std::size_t i = 0; i < cfg.nx; ++i) cfg.active_mask[i] = (cfg.nx - 1 - i) % stride == 0;
  const ArrayMeasurement m = measure_array(s, cfg, phases);
  return summarize("subarray_periodic", {m.tube_power / m.radiated_power});
}

KContent k_content(const FieldSlice& slice, const Medium& medium) {
  const Spectrum spec = to_spectrum(slice, medium);
  const std::size_t nx = spec.nx(), ny = spec.ny();
  std::vector<double> p(nx, 0.0);
  const auto& c = spec.coefficients();
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) p[i] += std::norm(c[j * nx + i]);
  }
  if (spec.y_grid()) {
    for (double& v : p) v *= spec.dky() / (2.0 * kPi);
  }
  // Reorder to ascending kx.
  const std::size_t shift = nx / 2;
  KContent out;
  out.kx_rad_per_m.resize(nx);
  out.power.resize(nx);
  for (std::size_t n = 0; n < nx; ++n) {
    const std::size_t i = (n + nx - shift) % nx;
    out.kx_rad_per_m[n] = spec.kx(i);
    out.power[n] = p[i];
  }
  const auto best = static_cast<std::size_t>(std::max_element(out.power.begin(), out.power.end()) - out.power.begin());
  const double peak = out.power[best];
  if (peak > 0.0) {
    for (double& v : out.power) v /= peak;
  }
  out.peak_kx_rad_per_m = out.kx_rad_per_m[best];
  const Grid1D kg{out.kx_rad_per_m.front(), spec.dkx(), nx};
  out.fwhm_rad_per_m = peak > 0.0 ? half_crossing(out.power, kg, best, +1) - half_crossing(out.power, kg, best, -1) : 0.0;
  return out;
}

std::vector<OrderShare> order_shares(const FieldSlice& slice, const Medium& medium, double spacing_m) {
  if (!(spacing_m > 0.0)) throw DomainError("element spacing must be positive");
  const Spectrum spec = to_spectrum(slice, medium);
  const double g = 2.0 * kPi / spacing_m;
  const int mmax = static_cast<int>(std::floor(medium.wavenumber_rad_per_m / g + 0.5));
  std::vector<double> sums(static_cast<std::size_t>(2 * mmax + 1), 0.0);
  double total = 0.0;
  const auto& c = spec.coefficients();
  for (std::size_t j = 0; j < spec.ny(); ++j) {
    for (std::size_t i = 0; i < spec.nx(); ++i) {
      if (!spec.propagating(i, j)) continue;
      const double p = std::norm(c[j * spec.nx() + i]);
      const int m = std::clamp(static_cast<int>(std::lround(spec.kx(i) / g)), -mmax, mmax);
      sums[static_cast<std::size_t>(m + mmax)] += p;
      total += p;
    }
  }
  std::vector<OrderShare> out;
  for (int m = -mmax; m <= mmax; ++m) {
    out.push_back({m, total > 0.0 ? sums[static_cast<std::size_t>(m + mmax)] / total : 0.0});
  }
  return out;
}

PreparedBeam prepare_beam(const BeamSetup& setup, const Medium& medium, double z_extent_m) {
  DomainPlan plan = auto_domain(setup.window, setup.traj, z_extent_m, medium, setup.domain);
  const Grid1D support = aperture_support(setup.window, plan.x);
  const PhaseProfile phase = synthesize_phase(setup.traj, medium, support, setup.regime);
  const Footprint fp = make_footprint(setup.window, {phase});
  FieldSlice source = plan.y ? render_footprint(fp, plan.x, *plan.y, medium) : render_footprint(fp, plan.x, medium);
  return {medium, std::move(plan), std::move(source)};
}

std::vector<FrequencyPoint> frequency_sweep(const BeamSetup& setup, const std::vector<double>& frequencies_hz,
                                            std::optional<double> z_cross_m) {
  std::vector<FrequencyPoint> out;
  const double zmax = z_max(setup.window.aperture_lx(), setup.traj);
  const double z_cross = z_cross_m.value_or(zmax / 1.5);
  for (double f : frequencies_hz) {
    const Medium medium = make_medium(f);
    const PreparedBeam beam = prepare_beam(setup, medium, std::max(zmax, z_cross));
    const AngularSpectrumEngine engine(beam.source, medium, setup.propagation);
    const FieldSlice far = engine.propagate(zmax);
    const Grid1D& g = far.x_grid();
    LobeSample peak = locate_peak(far, g.start_m, g.last());
    const double predicted = setup.traj.x_at(zmax) + airy_peak_offset(setup.traj.beta_per_m, medium);
    out.push_back({f, fraunhofer_distance(setup.window.aperture_lx(), medium), zmax,
                   airy_fwhm(setup.traj.beta_per_m, medium), peak.x_peak_m, peak.x_peak_m - predicted,
                   engine.propagate(z_cross)});
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream line;
  line.imbue(std::locale::classic());
  line.precision(17);
  for (std::size_t i = 0; i < columns.size(); ++i) line << (i ? "," : "") << columns[i];
  line << '\n';
  for (const auto& r : rows) {
    if (r.size() != columns.size()) throw DomainError("csv row width does not match the header");
    for (std::size_t i = 0; i < r.size(); ++i) line << (i ? "," : "") << r[i];
    line << '\n';
  }
  out << line.str();
}

}  // namespace bendbeam
