// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "bendbeam/footprint.hpp"
#include "bendbeam/grid.hpp"
#include "bendbeam/medium.hpp"
#include "bendbeam/trajectory.hpp"

namespace bendbeam {

/// Plane-wave decomposition of a slice:
///   E~(k_x) = dx * sum_n E(x_n) exp(-j k_x x_n)
/// (times dy and exp(-j k_y y) in 2D), stored in transform order. With this
/// normalization power() = sum |E~|^2 dk/(2 pi) equals total_power of the
/// source slice.
class Spectrum {
public:
  Spectrum(Grid1D x, std::optional<Grid1D> y, double z_m, Medium medium, std::vector<cplx> coeffs);

  const Grid1D& x_grid() const noexcept { return x_; }
  const std::optional<Grid1D>& y_grid() const noexcept { return y_; }
  double z() const noexcept { return z_; }
  const Medium& medium() const noexcept { return medium_; }
  std::size_t nx() const noexcept { return x_.count; }
  std::size_t ny() const noexcept { return y_ ? y_->count : 1; }
  const std::vector<cplx>& coefficients() const noexcept { return coeffs_; }

  double dkx() const noexcept;
  double dky() const noexcept;
  double kx(std::size_t i) const noexcept;
  double ky(std::size_t j) const noexcept;
  /// k_x^2 + k_y^2 < k^2
  bool propagating(std::size_t i, std::size_t j = 0) const noexcept;

  /// sum |E~|^2 dk_x/(2 pi) [dk_y/(2 pi)]
  double power() const noexcept;
  /// Same sum restricted to propagating components.
  double propagating_power() const noexcept;

private:
  Grid1D x_;
  std::optional<Grid1D> y_;
  double z_;
  Medium medium_;
  std::vector<cplx> coeffs_;
};

enum class BorderPolicy { enforce, report, ignore };

struct PropagationOptions {
  /// Drop plane waves whose lateral walk over the step exceeds half the
  /// transform period; they would re-enter through the opposite edge.
  bool band_limit = true;
  BorderPolicy border = BorderPolicy::enforce;
  /// Max share of slice power allowed in the border cells.
  double border_threshold = 1e-4;
  /// Border width as a fraction of the grid count per side.
  double border_fraction = 1.0 / 32.0;
};

/// Opaque blocker at plane z: a strip |x - cx| < w/2 for 1D slices, a disk
/// of diameter w for 2D slices.
struct Blocker {
  double z_m = 0.0;
  double center_x_m = 0.0;
  double center_y_m = 0.0;
  double width_m = 0.0;
};

/// Applies the blocker mask (transmission 0) to a slice.
FieldSlice apply_blocker(const FieldSlice& slice, const Blocker& blocker);

Spectrum to_spectrum(const FieldSlice& slice, const Medium& medium);

/// Field at plane z from a spectrum known at spectrum.z(): each component
/// picks up exp(j k_z dz) with k_z = sqrt(k^2 - k_x^2 - k_y^2); evanescent
/// components decay as exp(-|k_z| |dz|) in either direction.
FieldSlice from_spectrum(const Spectrum& spectrum, double z_m,
                         const PropagationOptions& options = {});

/// Thrown under BorderPolicy::enforce when power reaches the grid border.
class BorderLeakError : public std::runtime_error {
public:
  BorderLeakError(double z_m, double fraction);
  double z() const noexcept { return z_; }
  double fraction() const noexcept { return fraction_; }

private:
  double z_;
  double fraction_;
};

/// Share of a slice's power sitting in its outer border cells.
double border_power_fraction(const FieldSlice& slice, double border_fraction = 1.0 / 32.0);

/// Propagation from a fixed source plane through optional blockers.
class AngularSpectrumEngine {
public:
  AngularSpectrumEngine(const FieldSlice& source, const Medium& medium, PropagationOptions options = {});

  const Spectrum& source_spectrum() const noexcept { return spectrum_; }
  const PropagationOptions& options() const noexcept { return options_; }

  /// Unblocked field at z.
  FieldSlice propagate(double z_m) const;

  /// Fields at ascending z planes. At each blocker plane the field is
  /// masked and re-transformed; without blockers every output equals
  /// propagate(z) bit for bit. Throws DomainError for unsorted z lists or a
  /// blocker outside (source z, max z].
  std::vector<FieldSlice> scan(const std::vector<double>& z_list, std::vector<Blocker> blockers = {}) const;
  /// scan that hands each slice to `sink` instead of keeping them all.
  void scan_each(const std::vector<double>& z_list, std::vector<Blocker> blockers,
                 const std::function<void(const FieldSlice&)>& sink) const;

private:
  FieldSlice checked(FieldSlice slice) const;

  Spectrum spectrum_;
  Medium medium_;
  PropagationOptions options_;
};

std::vector<FieldSlice> propagate_scan(const FieldSlice& source, const Medium& medium,
                                       const std::vector<double>& z_list,
                                       const std::vector<Blocker>& blockers = {},
                                       const PropagationOptions& options = {});

struct DomainOptions {
  double step_wavelengths = 0.25;  ///< grid step in units of lambda
  double margin_fwhm = 10.0;       ///< margin in main-lobe widths
  double min_margin_m = 0.05;
  double extra_lateral_m = 0.0;    ///< extra room on both sides (stray orders)
  double padding_factor = 2.0;
  bool three_d = false;
  std::size_t memory_cap_bytes = std::size_t{4} << 30;
  std::size_t slices_in_memory = 4;
};

struct DomainPlan {
  Grid1D x;
  std::optional<Grid1D> y;
  double occupied_lo_m;
  double occupied_hi_m;
  std::size_t memory_bytes;
};

/// Padded grid around an occupied x range [lo, hi] (margins already
/// included) and, for 3D, a y range centred on 0 with the given half-width.
/// Throws ResourceError if the memory estimate exceeds the cap.
DomainPlan plan_domain(double lo_m, double hi_m, std::optional<double> y_half_m, const Medium& medium,
                       const DomainOptions& options = {});

/// Chooses a padded transverse grid that contains the aperture, the caustic
/// up to z_max_request and the margins, with step <= lambda/4 and x = 0 on a
/// node. Throws ResourceError if the memory estimate exceeds the cap.
DomainPlan auto_domain(const AmplitudeWindow& aperture, const std::optional<ParabolicTrajectory>& traj,
                       double z_max_request_m, const Medium& medium, const DomainOptions& options = {});

}  // namespace bendbeam
