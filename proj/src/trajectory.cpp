// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "bendbeam/error.hpp"

namespace bendbeam {

// ---------------------------------------------------------------------------
// NumericTrajectory

struct NumericTrajectory::Spline {
  boost::math::interpolators::cardinal_quintic_b_spline<double> f;
  double lo;
  double hi;  // last abscissa the spline accepts; may sit an ulp below the grid's last node

  double clamp(double z) const {
    const double slack = 1e-9 * (hi - lo);
    if (z < lo - slack || z > hi + slack) throw DomainError("numeric trajectory evaluated outside its sampled z range");
    return std::clamp(z, lo, hi);
  }
};

NumericTrajectory::NumericTrajectory(Grid1D z, std::vector<double> x) : z_(z), x_(std::move(x)) {
  make_grid(z_.start_m, z_.step_m, z_.count);
  if (x_.size() != z_.count) throw DomainError("numeric trajectory: sample count does not match z grid");
  if (z_.count < 8) throw DomainError("numeric trajectory needs at least 8 samples");
  for (double v : x_) {
    if (!std::isfinite(v)) throw DomainError("numeric trajectory: non-finite sample");
  }
  Spline s{{x_, z_.start_m, z_.step_m}, z_.start_m, z_.last()};
  for (int i = 0; i < 8; ++i) {
    try {
      s.f(s.hi);
      break;
    } catch (const std::domain_error&) {
      s.hi = std::nextafter(s.hi, s.lo);
    }
  }
  spline_ = std::make_shared<const Spline>(std::move(s));
}

double NumericTrajectory::x_at(double z_m) const { return spline_->f(spline_->clamp(z_m)); }
double NumericTrajectory::slope_at(double z_m) const { return spline_->f.prime(spline_->clamp(z_m)); }
double NumericTrajectory::curvature_at(double z_m) const { return spline_->f.double_prime(spline_->clamp(z_m)); }

NumericTrajectory make_numeric_trajectory(const std::function<double(double)>& f, double z_lo_m,
                                          double z_hi_m, std::size_t count) {
  if (!(z_hi_m > z_lo_m) || count < 8) throw DomainError("numeric trajectory: bad sampling range");
  const double step = (z_hi_m - z_lo_m) / static_cast<double>(count - 1);
  Grid1D z = make_grid(z_lo_m, step, count);
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = f(z.coordinate(i));
  return NumericTrajectory(z, std::move(x));
}

// ---------------------------------------------------------------------------
// PhaseProfile

PhaseProfile::PhaseProfile(Grid1D grid, std::vector<double> phase_rad, PhaseRegime regime,
                           std::function<double(double)> law)
    : grid_(grid), phase_(std::move(phase_rad)), regime_(regime), law_(std::move(law)) {
  make_grid(grid_.start_m, grid_.step_m, grid_.count);
  if (phase_.size() != grid_.count) throw DomainError("phase profile: sample count does not match grid");
  for (double p : phase_) {
    if (!std::isfinite(p)) throw DomainError("phase profile: non-finite phase");
  }
}

bool PhaseProfile::covers(double x_m) const noexcept {
  const double tol = 1e-9 * grid_.step_m;
  return x_m >= support_min() - tol && x_m <= support_max() + tol;
}

double PhaseProfile::at(double x_m) const {
  if (!covers(x_m)) {
    std::ostringstream msg;
    msg << "x = " << x_m << " m lies outside the phase support [" << support_min() << ", "
        << support_max() << "]";
    throw DomainError(msg.str());
  }
  if (law_) return law_(std::clamp(x_m, support_min(), support_max()));
  // Cubic Lagrange through the four surrounding nodes.
  const double t = (x_m - grid_.start_m) / grid_.step_m;
  const auto n = static_cast<long long>(grid_.count);
  long long i0 = static_cast<long long>(std::floor(t)) - 1;
  i0 = std::clamp(i0, 0LL, n - 4 < 0 ? 0LL : n - 4);
  if (n < 4) {
    const double w = std::clamp(t, 0.0, 1.0);
    return (1.0 - w) * phase_[0] + w * phase_[1];
  }
  double sum = 0.0;
  for (long long a = 0; a < 4; ++a) {
    double basis = 1.0;
    for (long long b = 0; b < 4; ++b) {
      if (a != b) basis *= (t - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    }
    sum += basis * phase_[static_cast<std::size_t>(i0 + a)];
  }
  return sum;
}

PhaseProfile PhaseProfile::shifted(double offset_rad) const {
  std::vector<double> p = phase_;
  for (double& v : p) v += offset_rad;
  std::function<double(double)> law;
  if (law_) law = [inner = law_, offset_rad](double x) { return inner(x) + offset_rad; };
  return PhaseProfile(grid_, std::move(p), regime_, std::move(law));
}

PhaseProfile PhaseProfile::conjugated() const {
  std::vector<double> p = phase_;
  for (double& v : p) v = -v;
  std::function<double(double)> law;
  if (law_) law = [inner = law_](double x) { return -inner(x); };
  return PhaseProfile(grid_, std::move(p), regime_, std::move(law));
}

namespace {

PhaseProfile sample_law(const Grid1D& grid, PhaseRegime regime, std::function<double(double)> law) {
  std::vector<double> phase(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) phase[i] = law(grid.coordinate(i));
  return PhaseProfile(grid, std::move(phase), regime, std::move(law));
}

[[noreturn]] void radicand_error(const char* what, double x) {
  std::ostringstream msg;
  msg << what << ": negative radicand at x = " << x << " m";
  throw DomainError(msg.str());
}

// Clamp tiny negative round-off to zero; report genuine violations.
double checked_radicand(double r, double scale, const char* what, double x) {
  if (r >= 0.0) return r;
  if (r > -1e-12 * std::max(1.0, scale)) return 0.0;
  radicand_error(what, x);
}

void check_parabola(const ParabolicTrajectory& t) {
  if (!(t.beta_per_m > 0.0)) throw DomainError("parabolic trajectory needs beta > 0");
}

}  // namespace

PhaseProfile parabolic_phase_paraxial(const ParabolicTrajectory& traj, const Medium& medium,
                                      const Grid1D& x_grid) {
  check_parabola(traj);
  const double k = medium.wavenumber_rad_per_m;
  const double beta = traj.beta_per_m, x0 = traj.x0_m, z0 = traj.z0_m;
  auto law = [=](double x) {
    const double scale = std::abs(beta * z0 * z0) + std::abs(x0) + std::abs(x);
    const double r = checked_radicand(beta * z0 * z0 + x0 - x, scale, "paraxial parabolic phase", x);
    return -2.0 * beta * k * z0 * x - 4.0 / 3.0 * std::sqrt(beta) * k * r * std::sqrt(r);
  };
  return sample_law(x_grid, PhaseRegime::paraxial, law);
}

PhaseProfile parabolic_phase_nonparaxial(const ParabolicTrajectory& traj, const Medium& medium,
                                         const Grid1D& x_grid) {
  check_parabola(traj);
  const double k = medium.wavenumber_rad_per_m;
  const double beta = traj.beta_per_m, x0 = traj.x0_m, z0 = traj.z0_m;
  auto law = [=](double x) {
    const double scale = std::abs(beta * z0 * z0) + std::abs(x0) + std::abs(x);
    const double r = checked_radicand(x0 - x + beta * z0 * z0, scale, "non-paraxial parabolic phase", x);
    const double psi = 2.0 * std::sqrt(beta * r) - 2.0 * beta * z0;
    return k / (4.0 * beta) * (-(psi + 4.0 * beta * z0) * std::sqrt(1.0 + psi * psi) + std::asinh(psi));
  };
  return sample_law(x_grid, PhaseRegime::nonparaxial, law);
}

PhaseProfile circular_phase(double radius_m, const Medium& medium, const Grid1D& x_grid) {
  if (!(radius_m > 0.0)) throw DomainError("circular trajectory needs R > 0");
  const double k = medium.wavenumber_rad_per_m;
  const double R = radius_m;
  auto law = [=](double x) {
    double u = x / R;
    if (u < 1.0) {
      if (u > 1.0 - 1e-12) {
        u = 1.0;
      } else {
        std::ostringstream msg;
        msg << "circular phase: x/R = " << u << " < 1 at x = " << x << " m";
        throw DomainError(msg.str());
      }
    }
    // arcsec(u) = acos(1/u)
    return k * R * (std::sqrt(u * u - 1.0) - std::acos(1.0 / u));
  };
  return sample_law(x_grid, PhaseRegime::nonparaxial, law);
}

PhaseProfile circular_caustic_phase(double radius_m, const Medium& medium, const Grid1D& x_grid) {
  if (!(radius_m > 0.0)) throw DomainError("circular trajectory needs R > 0");
  const double k = medium.wavenumber_rad_per_m;
  const double R = radius_m;
  auto law = [=](double x) {
    if (x > 1e-12 * R) {
      std::ostringstream msg;
      msg << "circular caustic phase is defined for x <= 0, got x = " << x << " m";
      throw DomainError(msg.str());
    }
    const double u = std::max(1.0, (R - x) / R);
    return -k * R * (std::sqrt(u * u - 1.0) - std::acos(1.0 / u));
  };
  return sample_law(x_grid, PhaseRegime::nonparaxial, law);
}

PhaseProfile phase_from_trajectory_numeric(const NumericTrajectory& traj, const Medium& medium,
                                           const Grid1D& x_grid) {
  const double k = medium.wavenumber_rad_per_m;
  const Grid1D& zg = traj.z_grid();
  const double z_lo = zg.start_m, z_hi = zg.last();

  const std::size_t probes = 4 * zg.count;

  // A straight line has no caustic: every ray shares one slope and the ray
  // map collapses onto a point, so the phase is a plain steering ramp.
  const double s0 = traj.slope_at(z_lo);
  bool straight = true;
  for (std::size_t i = 1; i <= probes && straight; ++i) {
    const double z = z_lo + (z_hi - z_lo) * static_cast<double>(i) / static_cast<double>(probes);
    straight = std::abs(traj.slope_at(z) - s0) <= 1e-9 * (1.0 + std::abs(s0));
  }
  if (straight) {
    const double g = k * s0 / std::sqrt(1.0 + s0 * s0);
    const double x_ref = x_grid.last();
    std::vector<double> phase(x_grid.count);
    for (std::size_t i = 0; i < x_grid.count; ++i) phase[i] = g * (x_grid.coordinate(i) - x_ref);
    return PhaseProfile(x_grid, std::move(phase), PhaseRegime::numeric,
                        [g, x_ref](double x) { return g * (x - x_ref); });
  }

  // Ray map x(z_c) = f(z_c) - z_c f'(z_c) must be strictly monotone.
  auto ray = [&](double z) { return traj.x_at(z) - z * traj.slope_at(z); };
  int direction = 0;
  double prev = ray(z_lo);
  for (std::size_t i = 1; i <= probes; ++i) {
    const double z = z_lo + (z_hi - z_lo) * static_cast<double>(i) / static_cast<double>(probes);
    const double cur = ray(z);
    const int d = cur > prev ? 1 : (cur < prev ? -1 : 0);
    if (d == 0 || (direction != 0 && d != direction)) {
      throw DomainError("caustic not single-valued over aperture");
    }
    direction = d;
    prev = cur;
  }
  const double r_lo = std::min(ray(z_lo), ray(z_hi));
  const double r_hi = std::max(ray(z_lo), ray(z_hi));
  const double tol_x = 1e-9 * x_grid.step_m;
  if (x_grid.start_m < r_lo - tol_x || x_grid.last() > r_hi + tol_x) {
    std::ostringstream msg;
    msg << "aperture [" << x_grid.start_m << ", " << x_grid.last()
        << "] m is not covered by rays of the sampled caustic [" << r_lo << ", " << r_hi << "]";
    throw DomainError(msg.str());
  }

  auto solve_z = [&, direction](double x) {
    auto g = [&](double z) { return (ray(z) - x) * static_cast<double>(direction); };
    if (g(z_lo) >= 0.0) return z_lo;
    if (g(z_hi) <= 0.0) return z_hi;
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-9; };
    const auto [a, b] = boost::math::tools::bisect(g, z_lo, z_hi, tol, iters);
    return 0.5 * (a + b);
  };
  auto dphi = [&, k](double x) {
    const double s = traj.slope_at(solve_z(x));
    return k * s / std::sqrt(1.0 + s * s);
  };
  using Gauss = boost::math::quadrature::gauss<double, 7>;

  const std::size_t n = x_grid.count;
  std::vector<double> phase(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    phase[i] = phase[i + 1] - Gauss::integrate(dphi, x_grid.coordinate(i), x_grid.coordinate(i + 1));
  }

  auto law = [grid = x_grid, phase, dphi](double x) {
    const std::size_t j = grid.nearest_index(x);
    const double xj = grid.coordinate(j);
    if (x == xj) return phase[j];
    return phase[j] + Gauss::integrate(dphi, xj, x);
  };
  return PhaseProfile(x_grid, std::move(phase), PhaseRegime::numeric, law);
}

PhaseProfile synthesize_phase(const TrajectorySpec& traj, const Medium& medium, const Grid1D& x_grid,
                              PhaseRegime regime) {
  if (const auto* p = std::get_if<ParabolicTrajectory>(&traj)) {
    return regime == PhaseRegime::nonparaxial ? parabolic_phase_nonparaxial(*p, medium, x_grid)
                                              : parabolic_phase_paraxial(*p, medium, x_grid);
  }
  if (const auto* c = std::get_if<CircularTrajectory>(&traj)) {
    return circular_phase(c->radius_m, medium, x_grid);
  }
  return phase_from_trajectory_numeric(std::get<NumericTrajectory>(traj), medium, x_grid);
}

CausticCurve caustic_from_phase(const PhaseProfile& profile, const Medium& medium,
                                double curvature_tolerance) {
  const double k = medium.wavenumber_rad_per_m;
  const auto& phi = profile.phase();
  const double h = profile.grid().step_m;
  double peak = 0.0;
  for (double p : phi) peak = std::max(peak, std::abs(p));
  // Second differences cannot resolve curvature below their round-off floor.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * peak / (h * h);
  const double tol = std::max(curvature_tolerance, floor);

  CausticCurve out;
  for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
    const double x = profile.grid().coordinate(i);
    const double d1 = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
    const double d2 = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
    if (std::abs(d2) < tol) {
      out.skipped_x_m.push_back(x);
      continue;
    }
    out.points.push_back({x, x - d1 / d2, -k / d2});
  }
  return out;
}

namespace {
double airy_scale(double beta, const Medium& m) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const double k = m.wavenumber_rad_per_m;
  return std::cbrt(4.0 * beta * k * k);
}
}  // namespace

double airy_fwhm(double beta_per_m, const Medium& medium) { return 2.278 / airy_scale(beta_per_m, medium); }

double airy_peak_offset(double beta_per_m, const Medium& medium) {
  return -1.02 / airy_scale(beta_per_m, medium);
}

double focal_distance(double x0_m, double z0_m, double beta_per_m, const Medium& medium,
                      std::optional<double> peak_offset_m) {
  const double dx = peak_offset_m ? *peak_offset_m : airy_peak_offset(beta_per_m, medium);
  const double r = -(x0_m + dx) / beta_per_m;
  if (r < 0.0) {
    if (r > -1e-12) return z0_m;
    throw DomainError("focal distance: -(x0 + dx_m)/beta is negative, the beams never meet on axis");
  }
  return std::sqrt(r) + z0_m;
}

double z_max(double aperture_lx_m, const ParabolicTrajectory& traj) {
  check_parabola(traj);
  const double r = (aperture_lx_m + traj.beta_per_m * traj.z0_m * traj.z0_m + traj.x0_m) / traj.beta_per_m;
  if (r < 0.0) throw DomainError("z_max: negative radicand, no edge ray reaches the caustic");
  return std::sqrt(r);
}

double fraunhofer_distance(double aperture_m, const Medium& medium) {
  return 2.0 * aperture_m * aperture_m / medium.wavelength_m;
}

SpatialBandwidth airy_spatial_bandwidth(double beta_per_m, double alpha_per_m, const Medium& medium) {
  if (!(beta_per_m > 0.0) || !(alpha_per_m > 0.0)) throw DomainError("bandwidth needs alpha, beta > 0");
  const double fwhm = 2.0 * medium.wavenumber_rad_per_m * std::sqrt(std::log(2.0) * 2.0 * beta_per_m / alpha_per_m);
  return {fwhm, kPi / fwhm, fwhm / medium.wavenumber_rad_per_m};
}

ParabolicTrajectory solve_parabola_through_point(double x_rx_m, double z_rx_m, ParabolicTrajectory known,
                                                 ParabolaUnknown unknown) {
  ParabolicTrajectory out = known;
  switch (unknown) {
    case ParabolaUnknown::beta: {
      const double dz = z_rx_m - known.z0_m;
      if (dz == 0.0) throw DomainError("infeasible geometry: receiver at the vertex depth, beta undetermined");
      out.beta_per_m = (x_rx_m - known.x0_m) / (dz * dz);
      if (!(out.beta_per_m > 0.0)) throw DomainError("infeasible geometry: receiver requires beta <= 0");
      break;
    }
    case ParabolaUnknown::x0: {
      check_parabola(known);
      const double dz = z_rx_m - known.z0_m;
      out.x0_m = x_rx_m - known.beta_per_m * dz * dz;
      break;
    }
    case ParabolaUnknown::z0: {
      check_parabola(known);
      const double r = (x_rx_m - known.x0_m) / known.beta_per_m;
      if (r < 0.0) throw DomainError("infeasible geometry: receiver lies on the wrong side of the vertex");
      out.z0_m = z_rx_m - std::sqrt(r);
      break;
    }
  }
  return out;
}

}  // namespace bendbeam
