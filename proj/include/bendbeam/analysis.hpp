// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bendbeam/codeword.hpp"
#include "bendbeam/footprint.hpp"
#include "bendbeam/grid.hpp"
#include "bendbeam/medium.hpp"
#include "bendbeam/propagation.hpp"
#include "bendbeam/trajectory.hpp"

namespace bendbeam {

struct LobeSample {
  double z_m;
  double x_peak_m;
  double peak_intensity;
  double fwhm_m;
  double predicted_x_m;  ///< x_c(z) + peak offset
  double deviation_m;    ///< x_peak - predicted
  bool lost;             ///< maximum sat on the search-window edge
};

struct LobeTrack {
  std::vector<LobeSample> samples;
  /// Largest |deviation| over samples with z in [z_lo, z_hi]; +inf if any of
  /// them lost the lobe.
  double max_abs_deviation(double z_lo_m, double z_hi_m) const;
};

/// Intensity maximum of a 1D slice (or its y = 0 row) within [lo, hi], refined
/// by a three-point parabola. `lost` is set when the maximum is an end node.
LobeSample locate_peak(const FieldSlice& slice, double lo_m, double hi_m);

/// Follows the main lobe through `slices`: each slice is searched within
/// +-search_fwhm * fwhm of predicted(z).
LobeTrack track_lobe(const std::vector<FieldSlice>& slices, const std::function<double(double)>& predicted_x,
                     double fwhm_m, double search_fwhm = 3.0);
/// track_lobe with predicted = x_c(z) + airy_peak_offset and the Airy FWHM.
LobeTrack track_main_lobe(const std::vector<FieldSlice>& slices, const ParabolicTrajectory& traj,
                          const Medium& medium, double search_fwhm = 3.0);

/// Power in |x - center| <= half_width (all y for 2D slices).
double beam_tube_power(const FieldSlice& slice, double center_x_m, double half_width_m);
/// Tube centred on x_c(z) + peak offset with half-width tube_fwhm * FWHM.
double beam_tube_power(const FieldSlice& slice, const ParabolicTrajectory& traj, const Medium& medium,
                       double tube_fwhm = 1.5);

/// Square probe of the given side centred on (x, y).
Window rx_window(double x_m, double side_m = 0.1, double y_m = 0.0);

/// window power with the blocker over window power without it. Throws
/// DomainError when the unblocked power is zero.
double blockage_ratio(const FieldSlice& with_blocker, const FieldSlice& without_blocker, const Window& rx);

struct EfficiencyReport {
  std::string metric;
  double value = 0.0;  ///< equals mean
  std::size_t count = 0;
  double mean = 0.0;
  double std_dev = 0.0;
};

EfficiencyReport summarize(std::string metric, const std::vector<double>& values);

/// A bending beam realised by a discrete array and measured on a beam tube at
/// one reference plane. 1D (y-invariant) fields.
struct ArrayScenario {
  Medium medium;
  AmplitudeWindow window;
  ParabolicTrajectory traj;
  PhaseRegime regime = PhaseRegime::paraxial;
  double spacing_m = 0.0;    ///< base element spacing
  Grid1D grid;               ///< propagation grid
  double z_ref_m = 0.0;
  double tube_fwhm = 1.5;
  PropagationOptions propagation;
};

/// Scenario with spacing lambda/2 (unless given), reference plane z_max/2,
/// and a padded lambda/4 grid wide enough for stray diffraction.
ArrayScenario make_array_scenario(const Medium& medium, const AmplitudeWindow& window,
                                  const ParabolicTrajectory& traj, std::optional<double> spacing_m = std::nullopt,
                                  double step_wavelengths = 0.25);

/// Column phases of the scenario's array (continuous).
std::vector<double> scenario_phases(const ArrayScenario& s, const ArrayConfig& cfg);

struct ArrayMeasurement {
  double tube_power;
  double radiated_power;  ///< propagating part of the source spectrum
};
ArrayMeasurement measure_array(const ArrayScenario& s, const ArrayConfig& cfg, const std::vector<double>& phases);

/// Tube power with n-bit phases over tube power with continuous phases
/// (bit_depth nullopt gives exactly 1).
EfficiencyReport quantization_efficiency(const ArrayScenario& s, std::optional<int> bit_depth);

/// Mean and spread of tube power / radiated power over random column masks;
/// realization i uses seed + i.
EfficiencyReport subarray_efficiency(const ArrayScenario& s, double fraction_active, std::size_t realizations,
                                     std::uint64_t seed);

/// Same metric with every `stride`-th column active (spacing times stride).
EfficiencyReport periodic_subarray_efficiency(const ArrayScenario& s, std::size_t stride = 2);

struct KContent {
  std::vector<double> kx_rad_per_m;  ///< ascending
  std::vector<double> power;         ///< normalised to unit peak
  double peak_kx_rad_per_m = 0.0;
  double fwhm_rad_per_m = 0.0;       ///< around the global peak
};

/// |E~(kx)|^2 (integrated over ky for 2D slices).
KContent k_content(const FieldSlice& slice, const Medium& medium);

struct OrderShare {
  int order;
  double share;  ///< of total propagating power
};

/// Propagating power split into replication zones |kx - 2 pi m / d| < pi / d.
std::vector<OrderShare> order_shares(const FieldSlice& slice, const Medium& medium, double spacing_m);

/// Continuous footprint propagated with the angular spectrum engine.
struct BeamSetup {
  AmplitudeWindow window;
  ParabolicTrajectory traj;
  PhaseRegime regime = PhaseRegime::paraxial;
  DomainOptions domain;
  PropagationOptions propagation;
};

struct FrequencyPoint {
  double frequency_hz;
  double fraunhofer_m;
  double z_max_m;
  double fwhm_m;
  double x_peak_at_z_max_m;  ///< global intensity maximum at z_max
  double deviation_at_z_max_m;
  FieldSlice cross_section;  ///< at the requested plane
};

/// Per frequency: phases recomputed for k, field propagated to z_max and to
/// `z_cross` (nullopt: z_max / 1.5).
std::vector<FrequencyPoint> frequency_sweep(const BeamSetup& setup, const std::vector<double>& frequencies_hz,
                                            std::optional<double> z_cross_m = std::nullopt);

/// Source slice and padded grid for a setup at one frequency.
struct PreparedBeam {
  Medium medium;
  DomainPlan plan;
  FieldSlice source;
};
PreparedBeam prepare_beam(const BeamSetup& setup, const Medium& medium, double z_extent_m);

/// Writes `columns` as the header row, then each row at 17 significant
/// digits, so equal inputs give byte-identical files.
void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace bendbeam
