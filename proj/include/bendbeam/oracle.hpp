// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include "bendbeam/grid.hpp"
#include "bendbeam/medium.hpp"

namespace bendbeam {

/// Parameters of the closed-form 1D Airy beam whose main lobe follows
/// x = x0 + beta (z - z0)^2.
struct AiryParams {
  double beta_per_m = 0.002;
  double alpha_per_m = 0.0;  ///< exponential taper; 0 means infinite power
  double x0_m = 0.0;
  double z0_m = 0.0;
  cplx amplitude{1.0, 0.0};  ///< E0
};

struct AiryEvaluation {
  cplx value;
  bool saturated = false;  ///< magnitude fell outside double range and was clamped to 0
};

/// Paraxial Airy solution
///
///   E = E0 Ai[q (X - beta Z^2 + j (alpha/k) Z)] exp[alpha (X - 2 beta Z^2)]
///       * exp[j (2 beta k Z (X - 2/3 beta Z^2) + alpha^2 Z / (2k))]
///
/// with q = (4 beta k^2)^{1/3}, X = x - x0, Z = z - z0. The real phase term
/// carries a factor Z: without it the expression does not satisfy the
/// paraxial equation, and the angular-spectrum engine confirms this form.
/// Envelope convention: the carrier exp(j k z) is not included.
AiryEvaluation airy_field_checked(const AiryParams& params, double x_m, double z_m,
                                  const Medium& medium);
cplx airy_field(const AiryParams& params, double x_m, double z_m, const Medium& medium);

/// Mirror-symmetric (autofocusing) pair E(x - x0, z - z0) + E(-x - x0, z - z0).
cplx aaf_field(const AiryParams& params, double x_m, double z_m, const Medium& medium);

/// Spectrum of the z = z0 profile,
///   E(k_x) = E0 exp(-j k_x x0) / (2 q) * exp(j (k_x + j alpha)^3 / (12 beta k^2)),
/// which is one half of the transform  integral E(x, z0) exp(-j k_x x) dx.
/// Throws DomainError for alpha <= 0.
cplx airy_spectrum(const AiryParams& params, double kx_rad_per_m, const Medium& medium);

/// Samples airy_field (or aaf_field) on a grid at plane z. The closed form is
/// the slowly varying envelope; with `carrier` set the samples are multiplied
/// by exp(j k (z - z0)) so they compare directly with propagated fields.
FieldSlice airy_slice(const AiryParams& params, const Grid1D& x, double z_m, const Medium& medium,
                      bool carrier = false);
FieldSlice aaf_slice(const AiryParams& params, const Grid1D& x, double z_m, const Medium& medium,
                     bool carrier = false);

}  // namespace bendbeam
