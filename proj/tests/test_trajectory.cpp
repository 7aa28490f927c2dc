// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "bendbeam/error.hpp"
#include "bendbeam/trajectory.hpp"
#include "support.hpp"

using namespace bendbeam;

namespace {

const Medium kM = testing::medium_with_k(3141.59);

double rms_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

// both pinned to zero at their last node
double rms_pinned(const PhaseProfile& a, const PhaseProfile& b) {
  std::vector<double> pa = a.phase(), pb = b.phase();
  const double ca = pa.back(), cb = pb.back();
  for (double& v : pa) v -= ca;
  for (double& v : pb) v -= cb;
  return rms_diff(pa, pb);
}

}  // namespace

TEST_CASE("paraxial parabolic phase") {
  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  const Grid1D x = make_grid(-0.6, 0.001, 601);
  const PhaseProfile p = parabolic_phase_paraxial(t, kM, x);
  CHECK(p.regime() == PhaseRegime::paraxial);
  CHECK(p.at(0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(p.at(-0.5) == doctest::Approx(-66.230532496055859).epsilon(1e-12));

  const double h = 1e-6;
  const double d = (p.at(-0.5 + h) - p.at(-0.5 - h)) / (2 * h);
  CHECK(d == doctest::Approx(198.69159748816758).epsilon(1e-6));
}

TEST_CASE("paraxial phase derivative matches the ray slope node by node") {
  const ParabolicTrajectory t{0.004, -0.1, 2.0};
  const Grid1D x = make_grid(-0.8, 0.002, 300);
  const PhaseProfile p = parabolic_phase_paraxial(t, kM, x);
  for (std::size_t i = 1; i + 1 < x.count; i += 37) {
    const double xi = x.coordinate(i);
    // tangent from (xi, 0) to the parabola
    const double zc = std::sqrt(t.z0_m * t.z0_m + (t.x0_m - xi) / t.beta_per_m);
    const double h = 1e-6;
    const double d = (p.at(xi + h) - p.at(xi - h)) / (2 * h);
    CHECK(d == doctest::Approx(kM.wavenumber_rad_per_m * t.slope_at(zc)).epsilon(1e-6));
  }
}

TEST_CASE("negative radicand names the node") {
  const ParabolicTrajectory t{0.002, -0.2, 0.0};
  const Grid1D x = make_grid(-0.5, 0.1, 6);
  try {
    parabolic_phase_paraxial(t, kM, x);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("x =") != std::string::npos);
  }
}

TEST_CASE("non-paraxial parabolic phase") {
  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  const Grid1D x = make_grid(-1.0, 0.001, 1001);
  const PhaseProfile np = parabolic_phase_nonparaxial(t, kM, x);
  CHECK(np.regime() == PhaseRegime::nonparaxial);
  CHECK(np.at(0.0) == doctest::Approx(0.0).scale(1.0));

  // reduced form for x0 = z0 = 0
  const double k = kM.wavenumber_rad_per_m, b = t.beta_per_m;
  for (std::size_t i = 0; i < x.count; i += 50) {
    const double xi = x.coordinate(i);
    const double psi = 2.0 * std::sqrt(-b * xi);
    const double ref = k / (4 * b) * (-psi * std::sqrt(1 + psi * psi) + std::asinh(psi));
    CHECK(np.phase()[i] == doctest::Approx(ref).epsilon(1e-9));
  }

  const PhaseProfile pp = parabolic_phase_paraxial(t, kM, x);
  const auto [lo, hi] = std::minmax_element(pp.phase().begin(), pp.phase().end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.count; ++i) worst = std::max(worst, std::abs(np.phase()[i] - pp.phase()[i]));
  CHECK(worst < 0.01 * (*hi - *lo));
}

TEST_CASE("circular phase") {
  const Grid1D x = make_grid(1.0, 0.001, 1001);
  const PhaseProfile p = circular_phase(1.0, kM, x);
  CHECK(p.at(1.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(p.at(2.0) == doctest::Approx(2151.5281416865897).epsilon(1e-12));
  for (std::size_t i = 1; i < x.count; ++i) CHECK(p.phase()[i] > p.phase()[i - 1]);
  CHECK_THROWS_AS(circular_phase(1.0, kM, make_grid(0.5, 0.1, 4)), DomainError);
}

TEST_CASE("real-caustic circular phase launches rays tangent to the circle") {
  const double R = 1.0;
  const Grid1D x = make_grid(-0.6, 0.0005, 1201);
  const PhaseProfile p = circular_caustic_phase(R, kM, x);
  const double k = kM.wavenumber_rad_per_m;
  const double h = 1e-6;
  for (int i = 1; i <= 11; ++i) {
    const double xi = -0.05 * i;
    // a ray from (xi, 0) touching the circle about (R, 0) has cos(theta) = R / (R - xi)
    const double c = R / (R - xi);
    const double d = (p.at(xi + h) - p.at(xi - h)) / (2 * h);
    CHECK(d == doctest::Approx(k * std::sqrt(1.0 - c * c)).epsilon(1e-6));
  }
  // paraxial caustic near the launch edge sits on the circle
  const CausticCurve cc = caustic_from_phase(p, kM);
  for (const CausticPoint& pt : cc.points) {
    if (pt.z_c_m > 0.1 && pt.z_c_m < 0.2) CHECK(std::hypot(pt.x_c_m - R, pt.z_c_m) == doctest::Approx(R).epsilon(2e-3));
  }
}

TEST_CASE("numeric synthesis of a parabola") {
  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  const NumericTrajectory f = make_numeric_trajectory([&](double z) { return t.x_at(z); }, 0.0, 30.0, 301);
  const Grid1D x = make_grid(-1.0, 0.002, 501);
  const PhaseProfile num = phase_from_trajectory_numeric(f, kM, x);
  CHECK(num.regime() == PhaseRegime::numeric);
  CHECK(num.phase().back() == 0.0);
  CHECK(rms_pinned(num, parabolic_phase_nonparaxial(t, kM, x)) < 1e-3);
}

TEST_CASE("numeric synthesis of a straight line is a steering phase") {
  const double theta = 0.2;
  const NumericTrajectory f =
      make_numeric_trajectory([&](double z) { return z * std::tan(theta); }, 0.0, 20.0, 64);
  const Grid1D x = make_grid(-0.5, 0.01, 51);
  const PhaseProfile p = phase_from_trajectory_numeric(f, kM, x);
  for (std::size_t i = 0; i < x.count; ++i) {
    const double ref = kM.wavenumber_rad_per_m * std::sin(theta) * (x.coordinate(i) - x.last());
    CHECK(p.phase()[i] == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("numeric synthesis of a circle arc") {
  const double R = 1.0;
  const NumericTrajectory f =
      make_numeric_trajectory([&](double z) { return R - std::sqrt(R * R - z * z); }, 0.0, 0.9, 901);
  const Grid1D x = make_grid(-1.0, 0.001, 1001);
  CHECK(rms_pinned(phase_from_trajectory_numeric(f, kM, x), circular_caustic_phase(R, kM, x)) < 1e-3);
}

TEST_CASE("folding ray map is rejected") {
  // slope goes up and back down: rays cross inside the aperture
  const NumericTrajectory f =
      make_numeric_trajectory([](double z) { return 0.01 * std::sin(z); }, 0.0, 12.0, 200);
  try {
    phase_from_trajectory_numeric(f, kM, make_grid(-0.3, 0.001, 301));
    FAIL("expected a fold");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("caustic not single-valued over aperture") != std::string::npos);
  }
}

TEST_CASE("caustic of a lens phase is its focus") {
  const double F = 5.0;
  const Grid1D x = make_grid(-0.3, 0.001, 601);
  std::vector<double> phi(x.count);
  for (std::size_t i = 0; i < x.count; ++i) phi[i] = -kM.wavenumber_rad_per_m * x.coordinate(i) * x.coordinate(i) / (2 * F);
  const CausticCurve c = caustic_from_phase(PhaseProfile(x, phi, PhaseRegime::numeric), kM);
  REQUIRE(c.points.size() == x.count - 2);
  for (const CausticPoint& p : c.points) {
    CHECK(p.x_c_m == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    CHECK(p.z_c_m == doctest::Approx(F).epsilon(1e-6));
  }
}

TEST_CASE("linear phase has no caustic") {
  const Grid1D x = make_grid(-0.3, 0.001, 301);
  std::vector<double> phi(x.count);
  for (std::size_t i = 0; i < x.count; ++i) phi[i] = 100.0 * x.coordinate(i);
  const CausticCurve c = caustic_from_phase(PhaseProfile(x, phi, PhaseRegime::numeric), kM);
  CHECK(c.points.empty());
  CHECK(c.skipped_x_m.size() == x.count - 2);
}

TEST_CASE("caustic recovered from the Airy phase") {
  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  const Grid1D x = make_grid(-0.5, 0.0005, 1001);
  const CausticCurve c = caustic_from_phase(parabolic_phase_paraxial(t, kM, x), kM);
  double worst = 0.0;
  std::size_t used = 0;
  for (const CausticPoint& p : c.points) {
    if (p.z_c_m < 2.0 || p.z_c_m > 14.0) continue;
    worst = std::max(worst, std::abs(p.x_c_m - t.x_at(p.z_c_m)));
    ++used;
  }
  CHECK(used > 500);
  CHECK(worst < 1e-3);
}

TEST_CASE("caustic round trip for shifted parabolas") {
  for (const ParabolicTrajectory& t :
       {ParabolicTrajectory{0.002, -0.2, 3.0}, ParabolicTrajectory{0.01, 0.0, 0.0}, ParabolicTrajectory{0.005, -0.25, 7.5}}) {
    const Grid1D x = make_grid(-1.0, 0.0005, 1501);
    const CausticCurve c = caustic_from_phase(parabolic_phase_paraxial(t, kM, x), kM);
    double s = 0.0;
    for (const CausticPoint& p : c.points) s += std::pow(p.x_c_m - t.x_at(p.z_c_m), 2);
    CHECK(std::sqrt(s / static_cast<double>(c.points.size())) < 1e-3);
  }
}

TEST_CASE("main-lobe width and offset") {
  CHECK(airy_fwhm(0.002, kM) == doctest::Approx(0.053099535275176725).epsilon(1e-12));
  CHECK(airy_peak_offset(0.002, kM) == doctest::Approx(-0.02377591131724331).epsilon(1e-12));
  CHECK(airy_fwhm(0.016, kM) == doctest::Approx(airy_fwhm(0.002, kM) / 2).epsilon(1e-12));
  const Medium k2 = testing::medium_with_k(2 * 3141.59);
  CHECK(airy_fwhm(0.002, k2) == doctest::Approx(airy_fwhm(0.002, kM) / std::cbrt(4.0)).epsilon(1e-12));
  for (double b : {1e-4, 0.002, 0.3}) {
    CHECK(airy_peak_offset(b, kM) < 0.0);
    CHECK(airy_peak_offset(b, kM) / airy_fwhm(b, kM) == doctest::Approx(-1.02 / 2.278).epsilon(1e-12));
  }
  CHECK(airy_peak_offset(0.002, make_medium(150e9)) == doctest::Approx(-0.023764931114281591).epsilon(1e-12));
}

TEST_CASE("focal distance") {
  const Medium m = make_medium(150e9);
  CHECK(focal_distance(-0.25, 5.0, 0.002, m) == doctest::Approx(16.699678010831785).epsilon(1e-12));
  CHECK(focal_distance(-0.25, 5.0, 0.002, m) == doctest::Approx(16.7).epsilon(1e-3));
  const double d = airy_peak_offset(0.002, m);
  CHECK(focal_distance(-d, 3.0, 0.002, m) == doctest::Approx(3.0).epsilon(1e-12));
  // inverse design with the vertex offset switched off
  const double z0 = 10.0 - std::sqrt(0.15 / 0.002);
  CHECK(z0 == doctest::Approx(1.3397459621556135).epsilon(1e-12));
  CHECK(focal_distance(-0.15, z0, 0.002, m, 0.0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(focal_distance(0.5, 0.0, 0.002, m), DomainError);
}

TEST_CASE("z_max") {
  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  CHECK(z_max(0.5, t) == doctest::Approx(15.811388300841897).epsilon(1e-12));
  CHECK(z_max(0.25, t) == doctest::Approx(11.180339887498948).epsilon(1e-12));
  CHECK(z_max(0.125, t) == doctest::Approx(7.9056941504209483).epsilon(1e-12));
  CHECK(z_max(0.5, t) == doctest::Approx(15.8).epsilon(1e-3));
  CHECK(z_max(0.25, t) == doctest::Approx(11.2).epsilon(2e-3));
  CHECK(z_max(0.125, t) == doctest::Approx(7.9).epsilon(1e-3));
  CHECK(z_max(1.0, ParabolicTrajectory{0.002, 0.0, 10.0}) == doctest::Approx(24.494897427831781).epsilon(1e-12));
  CHECK_THROWS_AS(z_max(0.1, ParabolicTrajectory{0.002, -0.5, 0.0}), DomainError);

  double prev = 0.0;
  for (double lx = 0.1; lx < 2.0; lx += 0.1) {
    CHECK(z_max(lx, t) > prev);
    prev = z_max(lx, t);
  }
  prev = 1e9;
  for (double b = 0.001; b < 0.05; b *= 1.5) {
    CHECK(z_max(0.5, ParabolicTrajectory{b, 0.0, 0.0}) < prev);
    prev = z_max(0.5, ParabolicTrajectory{b, 0.0, 0.0});
  }
}

TEST_CASE("Fraunhofer distance") {
  CHECK(fraunhofer_distance(0.5, make_medium(150e9)) == doctest::Approx(250.17).epsilon(1e-4));
  CHECK(fraunhofer_distance(0.5, make_medium(10e9)) == doctest::Approx(16.678).epsilon(1e-4));
}

TEST_CASE("spatial bandwidth") {
  const Medium m = make_medium(150e9);
  const SpatialBandwidth bw = airy_spatial_bandwidth(0.002, 4.0, m);
  CHECK(bw.fwhm_over_k == doctest::Approx(0.052655376954683187).epsilon(1e-12));
  CHECK(bw.max_spacing_m / m.wavelength_m == doctest::Approx(9.4957064010825552).epsilon(1e-12));
  CHECK(bw.max_spacing_m / m.wavelength_m == doctest::Approx(9.5).epsilon(1e-3));
  CHECK(airy_spatial_bandwidth(0.008, 4.0, m).fwhm_rad_per_m == doctest::Approx(2 * bw.fwhm_rad_per_m).epsilon(1e-12));
  CHECK(airy_spatial_bandwidth(0.002, 1e12, m).fwhm_rad_per_m < 1e-3);
}

TEST_CASE("parabola through a receiver") {
  const ParabolicTrajectory b = solve_parabola_through_point(0.45, 15.0, {0.0, 0.0, 0.0}, ParabolaUnknown::beta);
  CHECK(b.beta_per_m == doctest::Approx(0.002).epsilon(1e-12));

  const ParabolicTrajectory z = solve_parabola_through_point(0.45, 0.5, {0.012, -0.02, 0.0}, ParabolaUnknown::z0);
  CHECK(z.z0_m == doctest::Approx(0.5 - std::sqrt(0.47 / 0.012)).epsilon(1e-12));
  CHECK(z.x_at(0.5) == doctest::Approx(0.45).epsilon(1e-12));

  const ParabolicTrajectory v = solve_parabola_through_point(-0.1, 4.0, {0.002, -0.1, 0.0}, ParabolaUnknown::z0);
  CHECK(v.z0_m == doctest::Approx(4.0).epsilon(1e-12));

  const ParabolicTrajectory x0 = solve_parabola_through_point(0.3, 8.0, {0.002, 0.0, 2.0}, ParabolaUnknown::x0);
  CHECK(x0.x_at(8.0) == doctest::Approx(0.3).epsilon(1e-12));

  CHECK_THROWS_AS(solve_parabola_through_point(-0.5, 4.0, {0.002, 0.0, 0.0}, ParabolaUnknown::z0), DomainError);
  CHECK_THROWS_AS(solve_parabola_through_point(-0.5, 4.0, {0.002, 0.0, 0.0}, ParabolaUnknown::beta), DomainError);
}

TEST_CASE("synthesize_phase dispatch") {
  const ParabolicTrajectory t{0.002, 0.0, 0.0};
  const Grid1D x = make_grid(-0.5, 0.01, 51);
  CHECK(synthesize_phase(t, kM, x).regime() == PhaseRegime::paraxial);
  CHECK(synthesize_phase(t, kM, x, PhaseRegime::nonparaxial).regime() == PhaseRegime::nonparaxial);
  const PhaseProfile p = synthesize_phase(t, kM, x);
  CHECK(p.shifted(1.0).at(-0.2) == doctest::Approx(p.at(-0.2) + 1.0));
  CHECK(p.conjugated().at(-0.2) == doctest::Approx(-p.at(-0.2)));
  CHECK_THROWS_AS(p.at(0.5), DomainError);
}
