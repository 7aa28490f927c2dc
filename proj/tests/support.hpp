// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <span>

#include "bendbeam/grid.hpp"
#include "bendbeam/medium.hpp"

namespace testing {

inline bendbeam::Medium medium_with_k(double k) { return bendbeam::make_medium(bendbeam::kSpeedOfLight * k / (2.0 * bendbeam::kPi)); }

inline double rel_l2(std::span<const bendbeam::cplx> a, std::span<const bendbeam::cplx> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace testing
