// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/oracle.hpp"

#include <cmath>
#include <limits>

#include "bendbeam/airy.hpp"
#include "bendbeam/error.hpp"

namespace bendbeam {
namespace {

void check(const AiryParams& p) {
  if (!(p.beta_per_m > 0.0)) throw DomainError("Airy beam needs beta > 0");
  if (!(p.alpha_per_m >= 0.0)) throw DomainError("Airy taper alpha must be >= 0");
}

}  // namespace

AiryEvaluation airy_field_checked(const AiryParams& params, double x_m, double z_m,
                                  const Medium& medium) {
  check(params);
  const double k = medium.wavenumber_rad_per_m;
  const double beta = params.beta_per_m;
  const double alpha = params.alpha_per_m;
  const double X = x_m - params.x0_m;
  const double Z = z_m - params.z0_m;
  const double q = std::cbrt(4.0 * beta * k * k);

  const cplx arg = q * cplx(X - beta * Z * Z, alpha / k * Z);
  const double phase = 2.0 * beta * k * Z * (X - 2.0 / 3.0 * beta * Z * Z) + alpha * alpha * Z / (2.0 * k);
  const double taper = alpha * (X - 2.0 * beta * Z * Z);

  // Fold the decaying Airy envelope and the taper into one exponent so that
  // neither overflows on its own far from the lobe.
  const cplx zeta = (2.0 / 3.0) * arg * std::sqrt(arg);
  const cplx scaled = airy_ai_scaled(arg);
  const cplx exponent = cplx(taper, phase) - zeta;
  if (scaled == cplx(0.0) || exponent.real() < -740.0) return {cplx(0.0), exponent.real() < -740.0};
  const double log_mag = exponent.real() + std::log(std::abs(scaled));
  if (log_mag > 709.0) return {cplx(0.0), true};
  if (log_mag < -740.0) return {cplx(0.0), true};
  return {params.amplitude * scaled * std::exp(exponent), false};
}

cplx airy_field(const AiryParams& params, double x_m, double z_m, const Medium& medium) {
  return airy_field_checked(params, x_m, z_m, medium).value;
}

cplx aaf_field(const AiryParams& params, double x_m, double z_m, const Medium& medium) {
  return airy_field(params, x_m, z_m, medium) + airy_field(params, -x_m, z_m, medium);
}

cplx airy_spectrum(const AiryParams& params, double kx_rad_per_m, const Medium& medium) {
  check(params);
  if (!(params.alpha_per_m > 0.0)) {
    throw DomainError("Airy spectrum requires alpha > 0 (alpha = 0 is not normalizable)");
  }
  const double k = medium.wavenumber_rad_per_m;
  const double beta = params.beta_per_m;
  const double q = std::cbrt(4.0 * beta * k * k);
  const cplx s(kx_rad_per_m, params.alpha_per_m);
  const cplx j(0.0, 1.0);
  const cplx exponent = j * s * s * s / (12.0 * beta * k * k) - j * kx_rad_per_m * params.x0_m;
  return params.amplitude / (2.0 * q) * std::exp(exponent);
}

FieldSlice airy_slice(const AiryParams& params, const Grid1D& x, double z_m, const Medium& medium,
                      bool carrier) {
  const cplx c = carrier ? std::polar(1.0, medium.wavenumber_rad_per_m * (z_m - params.z0_m)) : cplx(1.0);
  std::vector<cplx> v(x.count);
  for (std::size_t i = 0; i < x.count; ++i) v[i] = c * airy_field(params, x.coordinate(i), z_m, medium);
  return FieldSlice(x, z_m, std::move(v));
}

FieldSlice aaf_slice(const AiryParams& params, const Grid1D& x, double z_m, const Medium& medium,
                      bool carrier) {
  const cplx c = carrier ? std::polar(1.0, medium.wavenumber_rad_per_m * (z_m - params.z0_m)) : cplx(1.0);
  std::vector<cplx> v(x.count);
  for (std::size_t i = 0; i < x.count; ++i) v[i] = c * aaf_field(params, x.coordinate(i), z_m, medium);
  return FieldSlice(x, z_m, std::move(v));
}

}  // namespace bendbeam
