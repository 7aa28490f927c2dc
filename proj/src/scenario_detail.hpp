// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "bendbeam/scenario.hpp"

namespace bendbeam::detail {

/// Aperture interval a beam occupies: the source window, the beam's own
/// x-window, and the part where its phase is real.
std::pair<double, double> beam_window(const SourceConfig& s, const BeamConfig& b);

}  // namespace bendbeam::detail
