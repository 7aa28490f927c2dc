// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace bendbeam {

using cplx = std::complex<double>;

/// Uniform sampling of one transverse axis: coordinate(i) = start + i * step.
struct Grid1D {
  double start_m = 0.0;
  double step_m = 1.0;
  std::size_t count = 2;

  double coordinate(std::size_t i) const noexcept {
    return start_m + static_cast<double>(i) * step_m;
  }
  double last() const noexcept { return coordinate(count - 1); }
  /// Periodic length count * step (the span seen by a discrete transform).
  double period() const noexcept { return static_cast<double>(count) * step_m; }
  /// Index of the node closest to x, clamped to the grid.
  std::size_t nearest_index(double x) const noexcept;
  std::vector<double> coordinates() const;
};

/// Validating constructor: step > 0, count >= 2, finite start.
Grid1D make_grid(double start_m, double step_m, std::size_t count);

/// Smallest grid with the given step whose nodes are integer multiples of
/// `step_m` and which covers [lo, hi]. Keeps x = 0 on a node.
Grid1D aligned_grid(double lo_m, double hi_m, double step_m);

/// Complex scalar field sampled at one z-plane. 1D slices model fields that
/// are invariant along y; 2D slices store values row-major, x fastest
/// (index = iy * nx + ix). Immutable once built.
class FieldSlice {
public:
  FieldSlice(Grid1D x, double z_m, std::vector<cplx> values);
  FieldSlice(Grid1D x, Grid1D y, double z_m, std::vector<cplx> values);

  static FieldSlice zeros(Grid1D x, double z_m);
  static FieldSlice zeros(Grid1D x, Grid1D y, double z_m);

  bool is_2d() const noexcept { return y_.has_value(); }
  const Grid1D& x_grid() const noexcept { return x_; }
  const std::optional<Grid1D>& y_grid() const noexcept { return y_; }
  std::size_t nx() const noexcept { return x_.count; }
  std::size_t ny() const noexcept { return y_ ? y_->count : 1; }
  double z() const noexcept { return z_; }
  std::span<const cplx> values() const noexcept { return values_; }
  cplx at(std::size_t ix, std::size_t iy = 0) const { return values_[iy * x_.count + ix]; }
  /// Length (1D) or area (2D) represented by one node.
  double cell_measure() const noexcept;

  /// Same grid and z, new samples.
  FieldSlice with_values(std::vector<cplx> values) const;
  FieldSlice with_z(double z_m) const;
  /// The y-row closest to `y_m` (the slice itself when 1D).
  FieldSlice row(double y_m = 0.0) const;
  /// |E|^2 per node.
  std::vector<double> intensity() const;

private:
  void validate() const;

  Grid1D x_;
  std::optional<Grid1D> y_;
  double z_;
  std::vector<cplx> values_;
};

/// Axis-aligned measurement window. The y half is ignored for 1D slices; an
/// unbounded y extent integrates over the full y grid.
struct Window {
  double x_center_m = 0.0;
  double x_width_m = 0.0;
  double y_center_m = 0.0;
  double y_width_m = std::numeric_limits<double>::infinity();
};

/// Sum of |E|^2 times cell measure over the whole slice.
double total_power(const FieldSlice& slice);

/// Power inside `window`. Each node owns a cell of one grid step centred on
/// it; partially covered cells contribute their overlapping fraction, so the
/// result is exact for piecewise-constant fields and non-decreasing in the
/// window extent. Throws DomainError if the window misses the grid.
double window_power(const FieldSlice& slice, const Window& window);

}  // namespace bendbeam
