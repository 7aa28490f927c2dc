// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace bendbeam {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

/// Free-space medium at a single operating frequency.
///
/// The wavelength is always derived from the frequency; 150 GHz gives
/// 1.99862 mm, not the rounded 2 mm that is often quoted for that band.
struct Medium {
  double frequency_hz;
  double wavelength_m;
  double wavenumber_rad_per_m;
};

/// Throws DomainError for non-positive or non-finite frequencies.
Medium make_medium(double frequency_hz);

}  // namespace bendbeam
