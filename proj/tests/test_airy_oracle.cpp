// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>

#include "bendbeam/airy.hpp"
#include "bendbeam/error.hpp"
#include "bendbeam/oracle.hpp"
#include "bendbeam/propagation.hpp"
#include "bendbeam/trajectory.hpp"
#include "support.hpp"

using namespace bendbeam;

namespace {

struct AiRef {
  double x, y, re, im;
};

// Ai(x + j y) from mpmath at 40 digits
const AiRef kAiTable[] = {
    {0.0, 0.0, 0.35502805388781723926, 0.0},
    {1.0, 0.0, 0.13529241631288141552, 0.0},
    {-1.0, 0.0, 0.5355608832923521188, 0.0},
    {2.5, 0.0, 0.015725923380470489995, 0.0},
    {-2.5, 0.0, -0.11232506769296608919, 0.0},
    {5.0, 0.0, 0.00010834442813607441735, 0.0},
    {-5.0, 0.0, 0.35076100902411431979, 0.0},
    {7.9, 0.0, 6.2396400972839341797e-8, 0.0},
    {-7.9, 0.0, 0.041701883617386709387, 0.0},
    {8.1, 0.0, 3.5224356235735714843e-8, 0.0},
    {-8.1, 0.0, -0.14290814709358112018, 0.0},
    {12.0, 0.0, 1.393184688875360839e-13, 0.0},
    {-12.0, 0.0, -0.066555175054373129474, 0.0},
    {20.0, 0.0, 1.6916728686705403136e-27, 0.0},
    {-20.0, 0.0, -0.17640612707798468959, 0.0},
    {40.0, 0.0, 6.3657426585529149096e-75, 0.0},
    {-40.0, 0.0, -0.045933923437957249632, 0.0},
    {86.0, 0.0, 1.1423090882690392314e-232, 0.0},
    {-43.0, 0.0, 0.05863379811425936864, 0.0},
    {1.0, 2.0, -0.2193862549814275574, -0.17538591140810941789},
    {-3.0, 0.5, -0.52817234188234967819, 0.18682298552967844078},
    {-10.0, 0.55, 0.12823159127942481756, 0.86717877805601495894},
    {30.0, 0.55, -3.2275043695990266195e-49, -4.0394893819458165151e-50},
    {-30.0, 0.55, -0.87551948224873815112, 2.2850000306519186335},
    {6.0, 6.0, -0.00028849480809812294704, -0.00008659374575500713238},
    {-6.0, 6.0, 571985.54098144059062, -365041.17725298604199},
    {-7.0, -7.5, 130949396.8924804482, -65107712.434602711524},
    {0.5, -9.0, -236.42649139214420316, 18761.773575651507983},
    {-20.0, 3.0, -23003.578637620493911, 87419.751094449968873},
    {-50.0, 1.0, -92.812748523208073893, 83.602145855545016545},
    {-8.5, 8.0, -1348872370.3634253334, -4155452419.1411117183},
};

const AiryParams kTapered{0.002, 4.0, 0.0, 0.0};

}  // namespace

TEST_CASE("complex Ai against the reference table") {
  for (const AiRef& r : kAiTable) {
    const std::complex<double> ref(r.re, r.im);
    const std::complex<double> got = airy_ai({r.x, r.y});
    const double tol = std::abs(std::complex<double>(r.x, r.y)) <= 8.0 ? 1e-13 + 1e-12 * std::abs(ref)
                                                                       : 1e-11 * std::abs(ref);
    INFO("z = " << r.x << " + " << r.y << "j");
    CHECK(std::abs(got - ref) <= tol);
  }
}

TEST_CASE("Ai is real on the real axis and conjugate-symmetric") {
  for (double x = -30.0; x <= 30.0; x += 0.37) {
    const auto r = airy_ai({x, 0.0});
    CHECK(std::abs(r.imag()) <= 1e-12 * std::abs(r.real()) + 1e-300);
    const auto a = airy_ai({x, 1.3});
    const auto b = airy_ai({x, -1.3});
    CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::abs(a) + 1e-300);
  }
}

TEST_CASE("scaled Ai") {
  const std::complex<double> z(40.0, 3.0);
  const std::complex<double> zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const auto s = airy_ai_scaled(z);
  const auto direct = airy_ai(z) * std::exp(zeta);
  CHECK(std::abs(s - direct) <= 1e-11 * std::abs(s));
  CHECK(std::isfinite(std::abs(airy_ai_scaled({500.0, 0.0}))));
}

TEST_CASE("first maximum of Ai") {
  double best = -2.0, value = 0.0;
  for (double x = -2.0; x <= 0.0; x += 1e-5) {
    const double v = airy_ai({x, 0.0}).real();
    if (v > value) {
      value = v;
      best = x;
    }
  }
  CHECK(best == doctest::Approx(-1.0187929716474711).epsilon(1e-5));
}

TEST_CASE("tapered Airy field values") {
  const Medium m = make_medium(150e9);
  struct P {
    double x, z;
    cplx ref;
  };
  const P points[] = {{0.01, 0.0, {0.25801621582594654, 0.0}},
                      {-0.3, 2.0, {0.010732313622292215, -0.088614847438312439}},
                      {0.05, 5.0, {0.19324318184399746, 0.22483990206551278}},
                      {0.2, 10.0, {-0.02591393477116743, 0.17057681180782889}}};
  for (const P& p : points) {
    const cplx v = airy_field(kTapered, p.x, p.z, m);
    CHECK(std::abs(v - p.ref) <= 1e-10 * std::abs(p.ref));
  }
}

TEST_CASE("main lobe with taper decays slowly") {
  const Medium m = make_medium(150e9);
  const double d = airy_peak_offset(0.002, m);
  CHECK(std::abs(airy_field(kTapered, d, 0.0, m)) == doctest::Approx(0.48708221190704805).epsilon(1e-9));
  double peak5 = 0.0;
  for (int i = -100; i <= 100; ++i) {
    peak5 = std::max(peak5, std::abs(airy_field(kTapered, 0.05 + d + i * 1e-4, 5.0, m)));
  }
  CHECK(peak5 == doctest::Approx(0.41480948911605433).epsilon(1e-6));
  CHECK(std::abs(airy_field(kTapered, 0.05, 5.0, m)) == doctest::Approx(0.29647244204145122).epsilon(1e-9));
}

TEST_CASE("untapered Airy beam keeps its lobe") {
  const Medium m = make_medium(150e9);
  const AiryParams p{0.002, 0.0, 0.0, 0.0};
  const double d = airy_peak_offset(0.002, m);
  for (double z : {0.0, 5.0, 10.0}) {
    CHECK(std::abs(airy_field(p, 0.002 * z * z + d, z, m)) == doctest::Approx(0.5355608832923521).epsilon(1e-3));
  }
}

TEST_CASE("far tail saturates to zero") {
  const Medium m = make_medium(150e9);
  const AiryEvaluation e = airy_field_checked(AiryParams{0.002, 0.0, 0.0, 0.0}, 50.0, 0.0, m);
  CHECK(e.value == cplx(0.0, 0.0));
  CHECK(std::isfinite(std::abs(airy_field(kTapered, -40.0, 3.0, m))));
}

TEST_CASE("AAF field is mirror-symmetric") {
  const Medium m = make_medium(150e9);
  const AiryParams p{0.002, 4.0, -0.25, 5.0};
  for (double z : {0.0, 6.0, 12.0, 16.0}) {
    for (double x : {0.01, 0.07, 0.3}) {
      const cplx a = aaf_field(p, x, z, m);
      const cplx b = aaf_field(p, -x, z, m);
      CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + 1e-300));
    }
  }
}

TEST_CASE("AAF on-axis intensity peaks close to the focal distance") {
  const Medium m = make_medium(150e9);
  const AiryParams p{0.002, 0.0, -0.25, 5.0};
  const double df = focal_distance(-0.25, 5.0, 0.002, m);
  CHECK(df == doctest::Approx(16.699678010831785).epsilon(1e-12));
  double best_z = 0.0, best = 0.0;
  for (double z = 14.0; z <= 19.0; z += 1e-3) {
    const double v = std::norm(aaf_field(p, 0.0, z, m));
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  CHECK(std::abs(best_z - df) < 0.05);
}

TEST_CASE("spectrum of the tapered footprint") {
  const Medium m = make_medium(150e9);
  CHECK(std::abs(airy_spectrum(kTapered, 0.0, m)) == doctest::Approx(0.011652619676851534).epsilon(1e-12));
  CHECK_THROWS_AS(airy_spectrum(AiryParams{0.002, 0.0, 0.0, 0.0}, 0.0, m), DomainError);

  // the discrete transform of the sampled footprint is twice the closed form
  const Grid1D x = aligned_grid(-8.0, 2.0, m.wavelength_m / 4);
  const Spectrum s = to_spectrum(airy_slice(kTapered, x, 0.0, m), m);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.nx(); ++i) {
    const double kx = s.kx(i);
    if (std::abs(kx) > 400.0) continue;
    const cplx ref = 2.0 * airy_spectrum(kTapered, kx, m);
    num += std::norm(s.coefficients()[i] - ref);
    den += std::norm(ref);
  }
  CHECK(std::sqrt(num / den) < 0.01);
}

TEST_CASE("oracle rejects bad parameters") {
  const Medium m = make_medium(150e9);
  CHECK_THROWS_AS(airy_field(AiryParams{0.0, 0.0, 0.0, 0.0}, 0.0, 0.0, m), DomainError);
  CHECK_THROWS_AS(airy_field(AiryParams{0.002, -1.0, 0.0, 0.0}, 0.0, 0.0, m), DomainError);
}
