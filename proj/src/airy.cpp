// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/airy.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace bendbeam {
namespace {

using cld = std::complex<long double>;
using cd = std::complex<double>;

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;   // Ai(0)
constexpr long double kDAi0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr double kSeriesRadius = 8.0;
constexpr double kTwoPiOverThree = 2.0 * std::numbers::pi / 3.0;
constexpr int kTerms = 24;

// u_k of the asymptotic expansions:
// u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1}.
constexpr std::array<double, kTerms> asymptotic_coefficients() {
  std::array<double, kTerms> u{};
  u[0] = 1.0;
  for (int k = 1; k < kTerms; ++k) {
    const double num = (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0);
    u[k] = u[k - 1] * num / ((2.0 * k - 1.0) * 216.0 * k);
  }
  return u;
}

constexpr auto kU = asymptotic_coefficients();

cd series(cd z) {
  const cld w(z.real(), z.imag());
  const cld w3 = w * w * w;
  cld f = 1.0L, g = w;
  cld tf = 1.0L, tg = w;
  for (int k = 1; k < 200; ++k) {
    const long double k3 = 3.0L * k;
    tf *= w3 / ((k3 - 1.0L) * k3);
    tg *= w3 / (k3 * (k3 + 1.0L));
    f += tf;
    g += tg;
    if (std::abs(tf) + std::abs(tg) < 1e-21L * (std::abs(f) + std::abs(g))) break;
  }
  const cld ai = kAi0 * f - kDAi0 * g;
  return {static_cast<double>(ai.real()), static_cast<double>(ai.imag())};
}

// Sum of (-1)^k u_k / zeta^k, truncated at the smallest term.
cd decaying_sum(cd zeta) {
  cd sum = 1.0, term = 1.0;
  double previous = 1.0;
  for (int k = 1; k < kTerms; ++k) {
    const cd next = term * (-1.0) / zeta;
    const double mag = kU[k] * std::abs(next);
    if (mag > previous) break;
    term = next;
    previous = mag;
    sum += kU[k] * term;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// exp(zeta) Ai(z) for |arg z| <= 2pi/3, |z| large.
cd scaled_decaying(cd z) {
  const cd zeta = (2.0 / 3.0) * z * std::sqrt(z);
  return decaying_sum(zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

// Ai(-w) for |arg w| < pi/3, |w| large.
cd oscillatory(cd w) {
  const cd zeta = (2.0 / 3.0) * w * std::sqrt(w);
  cd p = 0.0, q = 0.0;
  cd inv = 1.0 / zeta;
  cd power = 1.0;
  double previous = 2.0;
  for (int k = 0; k < kTerms; ++k) {
    const double mag = kU[k] * std::abs(power);
    if (k > 1 && mag > previous) break;
    previous = mag;
    // (-1)^{floor(k/2)} grouping: even k feed P, odd k feed Q.
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * kU[k] * power;
    } else {
      q += sign * kU[k] * power;
    }
    power *= inv;
  }
  const cd phase = zeta - std::numbers::pi / 4.0;
  return (std::cos(phase) * p + std::sin(phase) * q) /
         (std::sqrt(std::numbers::pi) * std::pow(w, 0.25));
}

}  // namespace

cd airy_ai(cd z) {
  if (std::abs(z) <= kSeriesRadius) return series(z);
  if (std::abs(std::arg(z)) <= kTwoPiOverThree) {
    const cd zeta = (2.0 / 3.0) * z * std::sqrt(z);
    return std::exp(-zeta) * scaled_decaying(z);
  }
  return oscillatory(-z);
}

cd airy_ai_scaled(cd z) {
  const cd zeta = (2.0 / 3.0) * z * std::sqrt(z);
  if (std::abs(z) > kSeriesRadius && std::abs(std::arg(z)) <= kTwoPiOverThree) {
    return scaled_decaying(z);
  }
  return std::exp(zeta) * airy_ai(z);
}

}  // namespace bendbeam
