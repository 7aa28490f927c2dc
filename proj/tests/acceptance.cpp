// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bendbeam/analysis.hpp"
#include "bendbeam/codeword.hpp"
#include "bendbeam/oracle.hpp"
#include "bendbeam/propagation.hpp"
#include "bendbeam/scenario.hpp"

using namespace bendbeam;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  }
};

Csv read_csv(const fs::path& p) {
  std::ifstream f(p);
  Csv c;
  std::string line;
  std::getline(f, line);
  std::stringstream h(line);
  for (std::string cell; std::getline(h, cell, ',');) c.header.push_back(cell);
  while (std::getline(f, line)) {
    std::stringstream s(line);
    std::vector<double> r;
    for (std::string cell; std::getline(s, cell, ',');) r.push_back(std::strtod(cell.c_str(), nullptr));
    c.rows.push_back(std::move(r));
  }
  return c;
}

struct Run {
  fs::path dir;
  json manifest;
};

Run run_preset(const std::string& name, const std::function<void(json&)>& edit = {}) {
  json cfg = json::parse(preset_config(name));
  if (edit) edit(cfg);
  const Scenario sc = parse_scenario(cfg.dump());
  const fs::path dir = fs::path(BENDBEAM_TEST_TMP) / "acceptance" / (name + (edit ? "_variant" : ""));
  fs::remove_all(dir);
  const RunSummary r = run_scenario(sc, dir);
  return {dir, json::parse(r.manifest_json)};
}

const Medium k150 = make_medium(150e9);

double wrap(double p) {
  p = std::fmod(p, 2 * kPi);
  return p < 0 ? p + 2 * kPi : p;
}

void oracle_equivalence() {
  const AiryParams p{0.002, 4.0, 0.0, 0.0};
  const Grid1D x = aligned_grid(-10.0, 6.0, k150.wavelength_m / 4);
  const AngularSpectrumEngine eng(airy_slice(p, x, 0.0, k150), k150, {true, BorderPolicy::enforce});
  const double w = 5.0 * airy_fwhm(0.002, k150);
  double worst = 0.0;
  std::string d;
  for (double z : {2.0, 5.0, 10.0}) {
    const FieldSlice f = eng.propagate(z);
    const FieldSlice ref = airy_slice(p, x, z, k150, true);
    const double xc = 0.002 * z * z;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.count; ++i) {
      const double xi = x.coordinate(i);
      if (std::abs(xi - xc) > w) continue;
      num += std::norm(f.at(i) - ref.at(i));
      den += std::norm(ref.at(i));
    }
    const double e = std::sqrt(num / den);
    worst = std::max(worst, e);
    d += fmt("z=%g: %.3f%%  ", z, 100 * e);
  }
  verdict(1, worst < 0.01, "engine vs closed form, rel. L2 over +-5 FWHM: " + d);
}

void trajectory_reach() {
  bool ok = true;
  std::string d;
  const std::vector<std::pair<double, double>> cases{{0.5, 15.8}, {0.25, 11.2}, {0.125, 7.9}};
  for (const auto& [lx, quoted] : cases) {
    BeamSetup b;
    b.window = uniform_aperture(lx, lx);
    b.traj = {0.002, 0.0, 0.0};
    b.propagation.border = BorderPolicy::report;
    const double zm = z_max(lx, b.traj);
    const PreparedBeam pb = prepare_beam(b, k150, 1.3 * zm);
    std::vector<double> zs;
    for (int i = 1; i <= 52; ++i) zs.push_back(1.3 * zm * i / 52.0);
    zs.push_back(0.9 * zm);
    std::sort(zs.begin(), zs.end());
    const auto slices = propagate_scan(pb.source, k150, zs, {}, b.propagation);
    const double fwhm = airy_fwhm(0.002, k150);
    const double dev = track_main_lobe(slices, b.traj, k150).max_abs_deviation(0.0, 0.9 * zm + 1e-9) / fwhm;
    // intensity on the predicted lobe position
    std::vector<double> on;
    for (const FieldSlice& s : slices) {
      const double xp = b.traj.x_at(s.z()) + airy_peak_offset(0.002, k150);
      on.push_back(std::norm(s.at(s.x_grid().nearest_index(xp))));
    }
    const double rel = on.back() / *std::max_element(on.begin(), on.end());
    const bool good = std::abs(zm - quoted) < 0.05 && dev < 1.0 && rel < 0.5;
    ok = ok && good;
    d += fmt("Lx=%g: z_max=%.2f dev=%.2f FWHM P(1.3z_max)=%.2f  ", lx, zm, dev, rel);
  }
  verdict(2, ok, d);
}

void autofocusing() {
  const AiryParams p{0.002, 0.0, -0.25, 5.0};
  const double df = focal_distance(p.x0_m, p.z0_m, p.beta_per_m, k150);
  double best_z = 0.0, best = -1.0;
  for (double z = 10.0; z <= 25.0; z += 1e-4) {
    const double v = std::norm(aaf_field(p, 0.0, z, k150));
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  verdict(3, best_z >= df && best_z <= df + 1.0,
          fmt("on-axis peak z=%.4f m, window [d_f, d_f+1] with d_f=%.4f m", best_z, df));
}

void bandwidth() {
  const Grid1D x = aligned_grid(-8.0, 2.0, k150.wavelength_m / 4);
  const KContent kc = k_content(airy_slice(AiryParams{0.002, 4.0, 0.0, 0.0}, x, 0.0, k150), k150);
  const SpatialBandwidth bw = airy_spatial_bandwidth(0.002, 4.0, k150);
  const double e1 = kc.fwhm_rad_per_m / bw.fwhm_rad_per_m - 1.0;
  const double spacing = kPi / kc.fwhm_rad_per_m / k150.wavelength_m;
  const double e2 = spacing / 9.5 - 1.0;
  verdict(4, std::abs(e1) < 0.05 && std::abs(e2) < 0.05,
          fmt("k FWHM %.2f vs %.2f rad/m (%+.2f%%), spacing bound %.3f lambda vs 9.5 (%+.2f%%)", kc.fwhm_rad_per_m,
              bw.fwhm_rad_per_m, 100 * e1, spacing, 100 * e2));
}

void undersampling() {
  const AmplitudeWindow w = uniform_aperture(0.5, 1.0);
  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  const double d = 2.0 * k150.wavelength_m;
  const ArrayScenario s = make_array_scenario(k150, w, t, d);
  const ArrayConfig a = array_for_aperture(0.5, d);
  const FieldSlice f = element_field(make_codeword(scenario_phases(s, a), a), a, w, s.grid);
  const KContent kc = k_content(f, k150);
  const double g = 2.0 * kPi / d;
  const auto zone_peak = [&](int m) {
    double bk = 0.0, bp = -1.0;
    for (std::size_t i = 0; i < kc.kx_rad_per_m.size(); ++i) {
      if (std::abs(kc.kx_rad_per_m[i] - m * g) >= g / 2) continue;
      if (kc.power[i] > bp) {
        bp = kc.power[i];
        bk = kc.kx_rad_per_m[i];
      }
    }
    return bk;
  };
  const double k0 = zone_peak(0);
  const double rp = zone_peak(1) - k0, rm = k0 - zone_peak(-1);
  const bool replicas = std::abs(rp - g) < 0.02 * g && std::abs(rm - g) < 0.02 * g;
  double m0 = 0.0;
  for (const OrderShare& o : order_shares(f, k150, d))
    if (o.order == 0) m0 = o.share;
  const auto orders = grating_orders(d, k150);
  bool thirty = orders.size() == 2;
  for (const GratingOrder& o : orders) thirty = thirty && std::abs(std::abs(o.angle_rad) - kPi / 6) < 1e-9;
  verdict(5, replicas && thirty && std::abs(m0 - 1.0 / 3.0) <= 0.1,
          fmt("replica spacing %+.1f / %.1f rad/m (2pi/d=%.1f), orders at +-30 deg: %s, m=0 share %.3f", rp, rm, g,
              thirty ? "yes" : "no", m0));
}

void quantization() {
  const Run r = run_preset("fig12");
  const json& s = r.manifest["summary"];
  std::vector<double> e;
  for (int n = 0; n <= 6; ++n) e.push_back(s.at(fmt("s0.f0.quantization.n%d", n)).get<double>());
  bool mono = true;
  for (int n = 2; n <= 6; ++n) mono = mono && e[n] >= e[n - 1] - 0.02;
  verdict(6, std::abs(e[1] - 0.40) <= 0.10 && e[3] >= 0.80 && e[4] >= 0.95 && mono,
          fmt("n=1..6: %.3f %.3f %.3f %.3f %.3f %.3f, monotone: %s", e[1], e[2], e[3], e[4], e[5], e[6],
              mono ? "yes" : "no"));
}

void subarray() {
  const Run r = run_preset("figA");
  const Csv c = read_csv(r.dir / "subarray.csv");
  double mean = -1.0, sd = -1.0, periodic = -1.0;
  for (const auto& row : c.rows) {
    if (row[c.col("source_index")] != 0.0) continue;
    if (row[c.col("periodic")] != 0.0) {
      periodic = row[c.col("mean")];
    } else if (std::abs(row[c.col("fraction_active")] - 0.5) < 1e-12) {
      mean = row[c.col("mean")];
      sd = row[c.col("std_dev")];
      if (row[c.col("count")] != 100.0) mean = -1.0;
    }
  }
  verdict(7, mean > 0 && sd / mean < 0.2 && mean >= periodic,
          fmt("random half: mean %.4f std/mean %.3f (100 seeds), periodic doubled spacing %.4f", mean, sd / mean,
              periodic));
}

void blockage() {
  const Run r = run_preset("fig4");
  const Csv c = read_csv(r.dir / "blockage.csv");
  double bend = -1.0, conv = -1.0, best03 = 0.0;
  for (const auto& row : c.rows) {
    const int src = static_cast<int>(row[c.col("source_index")]);
    const double w = row[c.col("width_m")], z = row[c.col("z_blocker_m")], v = row[c.col("ratio")];
    if (std::abs(w - 0.2) < 1e-9 && std::abs(z - 5.0) < 1e-9) (src == 0 ? bend : conv) = v;
    if (src == 0 && std::abs(w - 0.3) < 1e-9) best03 = std::max(best03, v);
  }
  const bool main = bend >= 0.8 && conv <= 0.2 && bend >= 3.0 * conv;
  const Run disk = run_preset("fig4", [](json& cfg) {
    cfg["mode"] = "3d";
    cfg["precision"] = "reduced";
    cfg["grid"]["y_half_width_m"] = 1.0;
    cfg["sources"].erase(1);
    cfg["metrics"]["enabled"] = {"blockage_sweep"};
    cfg["metrics"]["blockage"]["widths_m"] = {0.3};
    cfg["metrics"]["blockage"]["z_m"] = {1.0};
  });
  const Csv dc = read_csv(disk.dir / "blockage.csv");
  const double disk03 = dc.rows.at(0)[dc.col("ratio")];
  verdict(8, main && best03 > 1.0,
          fmt("d_bl=0.2 at z=5: bending %.3f, conventional %.4f, quotient %.0f; d_bl=0.3 strip max %.4f (needs > 1); "
              "context: 3D disk d_bl=0.3 at z=1 gives %.4f",
              bend, conv, bend / conv, best03, disk03));
}

void frequency_scaling() {
  const Run r = run_preset("fig13");
  const Csv c = read_csv(r.dir / "frequency_sweep.csv");
  std::map<double, double> dev;
  for (const auto& row : c.rows) dev[row[c.col("frequency_hz")]] = row[c.col("deviation_over_fwhm")];
  std::map<double, double> zf;
  for (const auto& f : r.manifest["derived"]) zf[f["frequency_hz"].get<double>()] = f["sources"][0]["z_F_m"].get<double>();
  const bool zf_ok = std::abs(zf[10e9] / 16.7 - 1) < 0.01 && std::abs(zf[150e9] / 250 - 1) < 0.01 &&
                     std::abs(zf[300e9] / 500 - 1) < 0.01;
  const bool hi = std::abs(dev[150e9]) < 1.0 && std::abs(dev[300e9]) < 1.0;
  const bool lo = std::abs(dev[10e9]) > 3.0;
  verdict(9, zf_ok && hi && lo,
          fmt("deviation at z_max: 10 GHz %+.2f FWHM (needs > 3), 150 GHz %+.2f, 300 GHz %+.2f; z_F %.2f / %.2f / %.2f m",
              dev[10e9], dev[150e9], dev[300e9], zf[10e9], zf[150e9], zf[300e9]));
}

void wideband() {
  const Run r = run_preset("figB");
  const json& s = r.manifest["summary"];
  bool ok = true;
  std::string d;
  const json& srcs = r.manifest["derived"][0]["sources"];
  for (std::size_t b = 0; b < srcs.size(); ++b) {
    const double beta = srcs[b]["beams"][0]["beta_per_m"].get<double>();
    double lo = 1e300, hi = -1e300;
    for (std::size_t f = 0; f < 3; ++f) {
      const double x = s.at(fmt("s%zu.f%zu.sweep.cross_section_peak_x_m", b, f)).get<double>();
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double fwhm = airy_fwhm(beta, k150);
    ok = ok && hi - lo < fwhm;
    d += fmt("beta=%g: spread %.2f mm vs FWHM %.1f mm  ", beta, 1e3 * (hi - lo), 1e3 * fwhm);
  }
  verdict(10, ok && srcs.size() == 3, d);
}

void properties() {
  std::string d;
  bool ok = true;
  const Grid1D x = aligned_grid(-0.5, 0.5, k150.wavelength_m / 4);
  std::vector<cplx> g(x.count), h(x.count);
  for (std::size_t i = 0; i < x.count; ++i) {
    const double u = x.coordinate(i) / 0.05;
    g[i] = std::exp(-u * u) * std::polar(1.0, 30.0 * u);
    h[i] = std::exp(-std::pow((x.coordinate(i) + 0.1) / 0.08, 2)) * std::polar(1.0, -12.0 * u);
  }
  const FieldSlice a(x, 0.0, g), b(x, 0.0, h);

  const double parseval = std::abs(to_spectrum(a, k150).power() / total_power(a) - 1.0);
  ok = ok && parseval < 1e-10;
  d += fmt("Parseval %.1e, ", parseval);

  PropagationOptions nolimit;
  nolimit.band_limit = false;
  const FieldSlice back = from_spectrum(to_spectrum(from_spectrum(to_spectrum(a, k150), 3.0, nolimit), k150), 0.0, nolimit);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.count; ++i) {
    num += std::norm(back.at(i) - a.at(i));
    den += std::norm(a.at(i));
  }
  const double trip = std::sqrt(num / den);
  ok = ok && trip < 1e-6;
  d += fmt("round trip %.1e, ", trip);

  std::vector<cplx> sum(x.count);
  const cplx c(0.3, -0.2);
  for (std::size_t i = 0; i < x.count; ++i) sum[i] = g[i] + c * h[i];
  const PropagationOptions opt{true, BorderPolicy::ignore};
  const FieldSlice fa = AngularSpectrumEngine(a, k150, opt).propagate(2.0);
  const FieldSlice fb = AngularSpectrumEngine(b, k150, opt).propagate(2.0);
  const FieldSlice fs = AngularSpectrumEngine(FieldSlice(x, 0.0, sum), k150, opt).propagate(2.0);
  num = den = 0.0;
  for (std::size_t i = 0; i < x.count; ++i) {
    num += std::norm(fa.at(i) + c * fb.at(i) - fs.at(i));
    den += std::norm(fs.at(i));
  }
  const double lin = std::sqrt(num / den);
  ok = ok && lin < 1e-10;
  d += fmt("linearity %.1e, ", lin);

  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  const Grid1D xa = aligned_grid(-6.0, 3.0, k150.wavelength_m / 4);
  const FieldSlice src = airy_slice(AiryParams{0.002, 4.0, 0.0, 0.0}, xa, 0.0, k150);
  std::vector<cplx> sv(src.values().begin(), src.values().end());
  for (cplx& v : sv) v *= cplx(-3.7, 2.2);
  const FieldSlice src2 = src.with_values(std::move(sv));
  const PropagationOptions rep{true, BorderPolicy::report};
  const Blocker blk{2.0, 0.01, 0.0, 0.05};
  const auto a0 = propagate_scan(src, k150, {3.0, 6.0}, {}, rep), a1 = propagate_scan(src, k150, {3.0, 6.0}, {blk}, rep);
  const auto b0 = propagate_scan(src2, k150, {3.0, 6.0}, {}, rep), b1 = propagate_scan(src2, k150, {3.0, 6.0}, {blk}, rep);
  const Window rx = rx_window(0.072);
  double sc = std::abs(blockage_ratio(b1[1], b0[1], rx) / blockage_ratio(a1[1], a0[1], rx) - 1.0);
  sc = std::max(sc, std::abs((beam_tube_power(b0[1], t, k150) / total_power(b0[1])) /
                                 (beam_tube_power(a0[1], t, k150) / total_power(a0[1])) -
                             1.0));
  const LobeTrack l0 = track_main_lobe(a0, t, k150), l1 = track_main_lobe(b0, t, k150);
  for (std::size_t i = 0; i < l0.samples.size(); ++i)
    sc = std::max(sc, std::abs(l1.samples[i].x_peak_m - l0.samples[i].x_peak_m) / std::abs(l0.samples[i].x_peak_m));
  ok = ok && sc <= 1e-12;
  d += fmt("scale invariance %.1e, ", sc);

  double rms = 0.0;
  for (const ParabolicTrajectory& p : {ParabolicTrajectory{0.002, -0.2, 3.0}, ParabolicTrajectory{0.01, 0.0, 0.0}}) {
    const Grid1D xc = make_grid(-1.0, 0.0005, 1501);
    const CausticCurve cc = caustic_from_phase(parabolic_phase_paraxial(p, k150, xc), k150);
    double s = 0.0;
    for (const CausticPoint& q : cc.points) s += std::pow(q.x_c_m - p.x_at(q.z_c_m), 2);
    rms = std::max(rms, std::sqrt(s / static_cast<double>(cc.points.size())));
  }
  ok = ok && rms < 1e-3;
  d += fmt("caustic round trip RMS %.1e m, ", rms);

  std::vector<double> ph;
  for (int i = 0; i < 20000; ++i) ph.push_back(-50.0 + 0.00731 * i);
  bool bound = true;
  for (int n = 1; n <= 8; ++n) {
    const std::vector<double> q = quantize_phases(ph, n);
    std::set<double> levels(q.begin(), q.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < ph.size(); ++i) {
      double e = std::abs(wrap(ph[i]) - q[i]);
      worst = std::max(worst, std::min(e, 2 * kPi - e));
    }
    bound = bound && worst <= kPi / std::pow(2.0, n) * (1 + 1e-12) && levels.size() == (std::size_t{1} << n);
  }
  ok = ok && bound;
  d += std::string("quantization bound ") + (bound ? "holds" : "violated");
  verdict(11, ok, d);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{oracle_equivalence, trajectory_reach, autofocusing, bandwidth,
                                                    undersampling,      quantization,     subarray,     blockage,
                                                    frequency_scaling,  wideband,         properties};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(i + 1), false, std::string("error: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
