// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace bendbeam {

/// Airy function Ai for complex argument.
///
/// Maclaurin series (evaluated in extended precision) for |z| <= 8, and the
/// Poincare asymptotic expansions beyond: the exponentially decaying form for
/// |arg z| <= 2pi/3, the oscillatory form around the negative real axis.
/// Absolute error stays below ~1e-13 on the series disk; relative error of
/// the asymptotic branch is below ~1e-13.
std::complex<double> airy_ai(std::complex<double> z);

/// Scaled variant exp(zeta) * Ai(z), zeta = (2/3) z^{3/2}, for callers that
/// combine Ai with a large exponential factor. Only the decaying sector
/// |arg z| <= 2pi/3 benefits; elsewhere it equals exp(zeta) * airy_ai(z).
std::complex<double> airy_ai_scaled(std::complex<double> z);

}  // namespace bendbeam
