// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bendbeam/footprint.hpp"
#include "bendbeam/grid.hpp"
#include "bendbeam/medium.hpp"
#include "bendbeam/trajectory.hpp"

namespace bendbeam {

/// How one element radiates into the aperture plane.
///   point: a sample of weight w * d / dx at the element position (split
///          linearly between the two nearest nodes), so the field moment per
///          element matches a d-wide patch;
///   zero_order_hold: w held constant over the element's d-wide cell.
enum class ElementModel { point, zero_order_hold };

/// Uniform linear (ny = 1) or planar array. Column i sits at
/// x = (i - nx + 1) d, so the array spans [-(nx - 1) d, 0]; rows are centred
/// on y = 0. An empty mask means every column is active.
struct ArrayConfig {
  double spacing_m = 0.0;
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::optional<int> bit_depth;  ///< nullopt = continuous phase
  std::vector<bool> active_mask;
  ElementModel model = ElementModel::point;

  double x_at(std::size_t i) const noexcept;
  double y_at(std::size_t j) const noexcept;
  bool active(std::size_t i) const noexcept { return active_mask.empty() || active_mask[i]; }
  std::size_t active_count() const noexcept;
};

/// Validates spacing, counts, bit depth, mask size and that one column is on.
void validate(const ArrayConfig& cfg);

/// Array filling [-lx, 0] with spacing d: nx = floor(lx/d + 1e-9) + 1.
ArrayConfig array_for_aperture(double lx_m, double spacing_m, std::size_t ny = 1);

/// Per-column phase phi(x_i). Throws DomainError if a column lies outside the
/// profile support.
std::vector<double> sample_phase(const PhaseProfile& profile, const ArrayConfig& cfg);

struct Codeword {
  std::vector<cplx> weights;  ///< one per column
  double norm() const noexcept;
};

/// Entries exp(j phi_i) / sqrt(nx); masked columns are 0.
Codeword make_codeword(const std::vector<double>& phases, const ArrayConfig& cfg);

/// Wraps each phase to [0, 2 pi) and rounds it to the nearest of the 2^n
/// levels 2 pi m / 2^n; ties go to the lower level.
std::vector<double> quantize_phases(const std::vector<double>& phases, int bit_depth);

/// Exactly round(fraction * nx) active columns chosen uniformly at random.
/// The same seed always yields the same mask on every platform.
std::vector<bool> random_subarray_mask(const ArrayConfig& cfg, double fraction_active, std::uint64_t seed);

struct GratingOrder {
  int order;
  double angle_rad;
  double kx_rad_per_m;
};

/// Non-zero orders m with |m lambda / d| < 1.
std::vector<GratingOrder> grating_orders(double spacing_m, const Medium& medium);

/// Aperture field of the codeword: column i carries sqrt(nx) w_i A(x_i, y)
/// through the element model, so a continuous-phase codeword reproduces the
/// footprint amplitude. Throws DomainError if the grid step exceeds d/2.
FieldSlice element_field(const Codeword& codeword, const ArrayConfig& cfg, const AmplitudeWindow& window,
                         const Grid1D& x);
FieldSlice element_field(const Codeword& codeword, const ArrayConfig& cfg, const AmplitudeWindow& window,
                         const Grid1D& x, const Grid1D& y);

/// CSV with columns element_index, x_m, amplitude, phase_rad, active.
void write_codeword_csv(std::ostream& out, const Codeword& codeword, const ArrayConfig& cfg);

}  // namespace bendbeam
