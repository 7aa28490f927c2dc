// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "bendbeam/grid.hpp"
#include "bendbeam/medium.hpp"

namespace bendbeam {

/// x_c = x0 + beta (z_c - z0)^2
struct ParabolicTrajectory {
  double beta_per_m = 0.002;
  double x0_m = 0.0;
  double z0_m = 0.0;

  double x_at(double z_m) const noexcept { return x0_m + beta_per_m * (z_m - z0_m) * (z_m - z0_m); }
  double slope_at(double z_m) const noexcept { return 2.0 * beta_per_m * (z_m - z0_m); }
};

/// Circle of radius R centred on the origin of the aperture coordinate.
struct CircularTrajectory {
  double radius_m = 1.0;
};

/// x_c = f(z_c) sampled on a uniform z grid and interpolated with a quintic
/// B-spline. Build with make_numeric_trajectory.
class NumericTrajectory {
public:
  NumericTrajectory(Grid1D z, std::vector<double> x);

  const Grid1D& z_grid() const noexcept { return z_; }
  const std::vector<double>& samples() const noexcept { return x_; }
  double x_at(double z_m) const;
  double slope_at(double z_m) const;
  double curvature_at(double z_m) const;  ///< f''

private:
  struct Spline;
  Grid1D z_;
  std::vector<double> x_;
  std::shared_ptr<const Spline> spline_;
};

/// Samples a callable f on [z_lo, z_hi] with `count` nodes.
NumericTrajectory make_numeric_trajectory(const std::function<double(double)>& f, double z_lo_m,
                                          double z_hi_m, std::size_t count);

using TrajectorySpec = std::variant<ParabolicTrajectory, CircularTrajectory, NumericTrajectory>;

enum class PhaseRegime { paraxial, nonparaxial, numeric };

/// Input-plane phase phi(x) over an aperture support. Closed-form profiles
/// keep their law so that off-grid evaluation (e.g. at array element
/// positions) is exact; numeric profiles interpolate their samples.
class PhaseProfile {
public:
  PhaseProfile(Grid1D grid, std::vector<double> phase_rad, PhaseRegime regime,
               std::function<double(double)> law = {});

  const Grid1D& grid() const noexcept { return grid_; }
  const std::vector<double>& phase() const noexcept { return phase_; }
  PhaseRegime regime() const noexcept { return regime_; }
  double support_min() const noexcept { return grid_.start_m; }
  double support_max() const noexcept { return grid_.last(); }
  bool covers(double x_m) const noexcept;
  /// Throws DomainError outside the support.
  double at(double x_m) const;

  /// Adds `offset_rad` everywhere (gauge change).
  PhaseProfile shifted(double offset_rad) const;
  /// The negated profile -phi(x).
  PhaseProfile conjugated() const;

private:
  Grid1D grid_;
  std::vector<double> phase_;
  PhaseRegime regime_;
  std::function<double(double)> law_;
};

/// Paraxial parabolic (Airy) phase
///   phi(x) = -2 beta k z0 x - 4/3 sqrt(beta) k (beta z0^2 + x0 - x)^{3/2}.
/// Throws DomainError naming the first node with a negative radicand.
PhaseProfile parabolic_phase_paraxial(const ParabolicTrajectory& traj, const Medium& medium,
                                      const Grid1D& x_grid);

/// Exact (non-paraxial) parabolic phase from integrating
/// dphi/dx = k f' / sqrt(1 + f'^2) with f' = Psi:
///   phi(x) = k / (4 beta) * ( -(Psi + 4 beta z0) sqrt(1 + Psi^2) + asinh(Psi) ),
///   Psi = 2 sqrt(beta (x0 - x + beta z0^2)) - 2 beta z0.
PhaseProfile parabolic_phase_nonparaxial(const ParabolicTrajectory& traj, const Medium& medium,
                                         const Grid1D& x_grid);

/// phi(x) = k R ( sqrt((x/R)^2 - 1) - arcsec(x/R) ), defined for x/R >= 1.
/// The rays leave the aperture tangent to the circle |r| = R; with the
/// exp(+j phi) convention that circle is a virtual caustic behind the
/// aperture. Use the conjugated, mirrored profile for a real caustic.
PhaseProfile circular_phase(double radius_m, const Medium& medium, const Grid1D& x_grid);

/// Real-caustic counterpart of circular_phase: phi(x) = -circ(R - x) for
/// x <= 0. Its caustic is the circle of radius R centred on (R, 0), leaving
/// the aperture edge at the origin and bending toward +x.
PhaseProfile circular_caustic_phase(double radius_m, const Medium& medium, const Grid1D& x_grid);

/// Numerical phase synthesis for an arbitrary caustic: for each x the ray
/// equation x = f(z_c) - z_c f'(z_c) is solved by bisection over the sampled
/// z range (tolerance 1e-9 m), dphi/dx = k f'/sqrt(1+f'^2) is integrated with
/// per-interval Gauss-Legendre quadrature, and phi is pinned to 0 at the
/// rightmost grid node. Throws DomainError "caustic not single-valued over
/// aperture" if the ray map folds.
PhaseProfile phase_from_trajectory_numeric(const NumericTrajectory& traj, const Medium& medium,
                                           const Grid1D& x_grid);

/// Dispatches on the trajectory kind. Parabolic trajectories use the paraxial
/// or non-paraxial closed form depending on `regime`.
PhaseProfile synthesize_phase(const TrajectorySpec& traj, const Medium& medium, const Grid1D& x_grid,
                              PhaseRegime regime = PhaseRegime::paraxial);

struct CausticPoint {
  double x_input_m;  ///< aperture coordinate of the generating ray
  double x_c_m;
  double z_c_m;
};

struct CausticCurve {
  std::vector<CausticPoint> points;
  std::vector<double> skipped_x_m;  ///< nodes where |phi''| fell below tolerance
};

/// (x_c, z_c) = (x - phi'/phi'', -k/phi'') with central differences on the
/// profile grid. Nodes with |phi''| < curvature_tolerance are skipped.
CausticCurve caustic_from_phase(const PhaseProfile& profile, const Medium& medium,
                                double curvature_tolerance = 1e-9);

/// Main-lobe FWHM 2.278 / (4 beta k^2)^{1/3}.
double airy_fwhm(double beta_per_m, const Medium& medium);
/// Main-lobe peak offset -1.02 / (4 beta k^2)^{1/3} from the caustic.
double airy_peak_offset(double beta_per_m, const Medium& medium);

/// Autofocusing distance d_f = sqrt(-(x0 + dx)/beta) + z0. `peak_offset_m`
/// defaults to airy_peak_offset; pass 0 to design on the caustic itself.
double focal_distance(double x0_m, double z0_m, double beta_per_m, const Medium& medium,
                      std::optional<double> peak_offset_m = std::nullopt);

/// Farthest distance the lobe follows a parabola from an aperture spanning
/// [-Lx, 0]: sqrt((Lx + beta z0^2 + x0) / beta).
double z_max(double aperture_lx_m, const ParabolicTrajectory& traj);

/// Fraunhofer distance 2 L^2 / lambda.
double fraunhofer_distance(double aperture_m, const Medium& medium);

struct SpatialBandwidth {
  double fwhm_rad_per_m;        ///< 2 k sqrt(ln2 * 2 beta / alpha)
  double max_spacing_m;         ///< Nyquist bound pi / fwhm
  double fwhm_over_k;
};
SpatialBandwidth airy_spatial_bandwidth(double beta_per_m, double alpha_per_m, const Medium& medium);

/// Which parabola parameter solve_parabola_through_point derives.
enum class ParabolaUnknown { beta, x0, z0 };

/// Completes a parabola through the receiver (x_rx, z_rx) given the other two
/// parameters (taken from `known`). For z0 the branch
/// z0 = z_rx - sqrt((x_rx - x0)/beta) is used. Throws DomainError when the
/// geometry has no real solution.
ParabolicTrajectory solve_parabola_through_point(double x_rx_m, double z_rx_m, ParabolicTrajectory known,
                                                 ParabolaUnknown unknown);

}  // namespace bendbeam
