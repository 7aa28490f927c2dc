// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/footprint.hpp"

#include <cmath>
#include <sstream>

#include "bendbeam/error.hpp"

namespace bendbeam {

double exponential_taper(double alpha_per_m, double x_m) { return std::exp(alpha_per_m * x_m); }

double gaussian_taper(double sigma_m, double center_m, double x_m) {
  const double u = (x_m - center_m) / sigma_m;
  return std::exp(-u * u);
}

namespace {
constexpr double kEdgeTolerance = 1e-9;
}

bool AmplitudeWindow::inside(double x_m, double y_m) const noexcept {
  const double tol = kEdgeTolerance * std::max(1.0, aperture_lx());
  return x_m >= x_min_m - tol && x_m <= x_max_m + tol && std::abs(y_m) <= 0.5 * y_width_m + tol;
}

double AmplitudeWindow::amplitude(double x_m, double y_m) const noexcept {
  if (!inside(x_m, y_m)) return 0.0;
  switch (kind) {
    case TaperKind::uniform:
      return level_v_per_m;
    case TaperKind::exponential:
      return level_v_per_m * exponential_taper(alpha_per_m, x_m);
    case TaperKind::gaussian:
      return level_v_per_m * gaussian_taper(sigma_m, center_m, x_m);
  }
  return 0.0;
}

AmplitudeWindow uniform_aperture(double lx_m, double ly_m, double level_v_per_m) {
  AmplitudeWindow w;
  w.level_v_per_m = level_v_per_m;
  w.x_min_m = -lx_m;
  w.x_max_m = 0.0;
  w.y_width_m = ly_m;
  return w;
}

Footprint make_footprint(const AmplitudeWindow& window, std::vector<PhaseProfile> phases) {
  if (phases.empty()) throw DomainError("footprint needs at least one beam");
  Footprint fp{window, {}};
  const double w = 1.0 / std::sqrt(static_cast<double>(phases.size()));
  for (auto& p : phases) fp.beams.push_back({cplx(w, 0.0), std::move(p), 0.0});
  return fp;
}

Grid1D aperture_support(const AmplitudeWindow& window, const Grid1D& x) {
  std::size_t first = x.count, last = 0;
  for (std::size_t i = 0; i < x.count; ++i) {
    if (window.inside(x.coordinate(i))) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == x.count || last == first) throw DomainError("aperture covers fewer than two grid nodes");
  return make_grid(x.coordinate(first), x.step_m, last - first + 1);
}

namespace {

void validate(const Footprint& fp) {
  if (fp.beams.empty()) throw DomainError("footprint needs at least one beam");
  const auto& w = fp.window;
  if (!(w.x_max_m > w.x_min_m) || !(w.y_width_m > 0.0)) throw DomainError("aperture has no extent");
  if (w.kind == TaperKind::gaussian && !(w.sigma_m > 0.0)) throw DomainError("gaussian taper needs sigma > 0");
  if (w.kind == TaperKind::exponential && !(w.alpha_per_m >= 0.0)) {
    throw DomainError("exponential taper needs alpha >= 0");
  }
}

// Phase of every beam at every aperture node of x; empty rows for nodes
// outside the aperture.
std::vector<std::vector<double>> beam_phases(const Footprint& fp, const Grid1D& x) {
  std::vector<std::vector<double>> out(fp.beams.size(), std::vector<double>(x.count, 0.0));
  for (std::size_t b = 0; b < fp.beams.size(); ++b) {
    const PhaseProfile& p = fp.beams[b].phase;
    for (std::size_t i = 0; i < x.count; ++i) {
      const double xi = x.coordinate(i);
      if (!fp.window.inside(xi)) continue;
      if (!p.covers(xi)) {
        std::ostringstream msg;
        msg << "phase profile of beam " << b << " covers [" << p.support_min() << ", " << p.support_max()
            << "] m, narrower than the aperture node x = " << xi << " m";
        throw DomainError(msg.str());
      }
      out[b][i] = p.at(xi);
    }
  }
  return out;
}

}  // namespace

FieldSlice render_footprint(const Footprint& fp, const Grid1D& x, const Medium& medium) {
  validate(fp);
  (void)medium;
  const auto phases = beam_phases(fp, x);
  std::vector<cplx> v(x.count);
  for (std::size_t i = 0; i < x.count; ++i) {
    const double a = fp.window.amplitude(x.coordinate(i));
    if (a == 0.0) continue;
    cplx sum = 0.0;
    for (std::size_t b = 0; b < fp.beams.size(); ++b) sum += fp.beams[b].weight * std::polar(1.0, phases[b][i]);
    v[i] = a * sum;
  }
  return FieldSlice(x, 0.0, std::move(v));
}

FieldSlice render_footprint(const Footprint& fp, const Grid1D& x, const Grid1D& y, const Medium& medium) {
  validate(fp);
  const double k = medium.wavenumber_rad_per_m;
  const auto phases = beam_phases(fp, x);
  std::vector<cplx> v(x.count * y.count);
  for (std::size_t iy = 0; iy < y.count; ++iy) {
    const double yy = y.coordinate(iy);
    for (std::size_t ix = 0; ix < x.count; ++ix) {
      const double a = fp.window.amplitude(x.coordinate(ix), yy);
      if (a == 0.0) continue;
      cplx sum = 0.0;
      for (std::size_t b = 0; b < fp.beams.size(); ++b) {
        const double ph = phases[b][ix] + k * std::sin(fp.beams[b].steer_rad) * yy;
        sum += fp.beams[b].weight * std::polar(1.0, ph);
      }
      v[iy * x.count + ix] = a * sum;
    }
  }
  return FieldSlice(x, y, 0.0, std::move(v));
}

}  // namespace bendbeam
