// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/medium.hpp"

#include <cmath>
#include <string>

#include "bendbeam/error.hpp"

namespace bendbeam {

Medium make_medium(double frequency_hz) {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw DomainError("frequency must be positive and finite, got " + std::to_string(frequency_hz));
  }
  const double wavelength = kSpeedOfLight / frequency_hz;
  return Medium{frequency_hz, wavelength, 2.0 * kPi / wavelength};
}

}  // namespace bendbeam
