// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "bendbeam/grid.hpp"
#include "bendbeam/medium.hpp"
#include "bendbeam/trajectory.hpp"

namespace bendbeam {

enum class TaperKind { uniform, exponential, gaussian };

/// exp(alpha x); equals 1 at the aperture's right edge x = 0.
double exponential_taper(double alpha_per_m, double x_m);
/// exp(-((x - center)/sigma)^2).
double gaussian_taper(double sigma_m, double center_m, double x_m);

/// Amplitude over a rectangular aperture [x_min, x_max] x [-Ly/2, Ly/2];
/// zero outside.
struct AmplitudeWindow {
  TaperKind kind = TaperKind::uniform;
  double level_v_per_m = 1.0;
  double alpha_per_m = 0.0;  ///< exponential taper rate
  double sigma_m = 0.0;      ///< gaussian width
  double center_m = 0.0;     ///< gaussian centre x_m
  double x_min_m = -1.0;
  double x_max_m = 0.0;
  double y_width_m = 1.0;

  bool inside(double x_m, double y_m = 0.0) const noexcept;
  /// Real amplitude A(x, y); zero outside the aperture.
  double amplitude(double x_m, double y_m = 0.0) const noexcept;
  double aperture_lx() const noexcept { return x_max_m - x_min_m; }
};

/// Uniform aperture spanning [-lx, 0] x [-ly/2, ly/2].
AmplitudeWindow uniform_aperture(double lx_m, double ly_m, double level_v_per_m = 1.0);

struct BeamComponent {
  cplx weight{1.0, 0.0};
  PhaseProfile phase;
  double steer_rad = 0.0;  ///< transverse steering, adds k sin(theta) y
};

/// Weighted superposition of beams sharing one amplitude window.
struct Footprint {
  AmplitudeWindow window;
  std::vector<BeamComponent> beams;
};

/// Footprint with equal-power weights 1/sqrt(N) and no steering.
Footprint make_footprint(const AmplitudeWindow& window, std::vector<PhaseProfile> phases);

/// E(x, y, 0) = sum_n w_n A(x, y) exp(j (phi_n(x) + k sin(theta_n) y)) on the
/// grid, exactly zero outside the aperture. The 1D overload renders the y = 0
/// cross-section. Throws DomainError if a phase profile does not cover every
/// aperture node.
FieldSlice render_footprint(const Footprint& fp, const Grid1D& x, const Medium& medium);
FieldSlice render_footprint(const Footprint& fp, const Grid1D& x, const Grid1D& y, const Medium& medium);

/// Aperture-node coordinates of `x` (nodes where the window is non-zero).
Grid1D aperture_support(const AmplitudeWindow& window, const Grid1D& x);

}  // namespace bendbeam
