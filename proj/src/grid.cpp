// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bendbeam/error.hpp"

namespace bendbeam {

std::size_t Grid1D::nearest_index(double x) const noexcept {
  const double t = std::round((x - start_m) / step_m);
  if (!(t > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(t), count - 1);
}

std::vector<double> Grid1D::coordinates() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = coordinate(i);
  return out;
}

Grid1D make_grid(double start_m, double step_m, std::size_t count) {
  if (!std::isfinite(start_m)) throw DomainError("grid start must be finite");
  if (!(step_m > 0.0) || !std::isfinite(step_m)) {
    throw DomainError("grid step must be positive, got " + std::to_string(step_m));
  }
  if (count < 2) throw DomainError("grid needs at least 2 nodes");
  return Grid1D{start_m, step_m, count};
}

Grid1D aligned_grid(double lo_m, double hi_m, double step_m) {
  if (!(hi_m > lo_m)) throw DomainError("aligned_grid: empty interval");
  if (!(step_m > 0.0)) throw DomainError("aligned_grid: step must be positive");
  // Tolerate round-off so that an interval already on nodes is not widened.
  const double eps = 1e-9;
  const auto first = static_cast<long long>(std::floor(lo_m / step_m + eps));
  const auto last = static_cast<long long>(std::ceil(hi_m / step_m - eps));
  const auto n = static_cast<std::size_t>(std::max<long long>(last - first + 1, 2));
  return make_grid(static_cast<double>(first) * step_m, step_m, n);
}

FieldSlice::FieldSlice(Grid1D x, double z_m, std::vector<cplx> values)
    : x_(x), z_(z_m), values_(std::move(values)) {
  validate();
}

FieldSlice::FieldSlice(Grid1D x, Grid1D y, double z_m, std::vector<cplx> values)
    : x_(x), y_(y), z_(z_m), values_(std::move(values)) {
  validate();
}

FieldSlice FieldSlice::zeros(Grid1D x, double z_m) {
  return FieldSlice(x, z_m, std::vector<cplx>(x.count));
}

FieldSlice FieldSlice::zeros(Grid1D x, Grid1D y, double z_m) {
  return FieldSlice(x, y, z_m, std::vector<cplx>(x.count * y.count));
}

void FieldSlice::validate() const {
  make_grid(x_.start_m, x_.step_m, x_.count);
  if (y_) make_grid(y_->start_m, y_->step_m, y_->count);
  if (!std::isfinite(z_)) throw DomainError("slice z must be finite");
  const std::size_t expected = x_.count * (y_ ? y_->count : 1);
  if (values_.size() != expected) {
    throw DomainError("slice holds " + std::to_string(values_.size()) + " values, grid needs " +
                      std::to_string(expected));
  }
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("slice contains a non-finite value");
    }
  }
}

double FieldSlice::cell_measure() const noexcept {
  return x_.step_m * (y_ ? y_->step_m : 1.0);
}

FieldSlice FieldSlice::with_values(std::vector<cplx> values) const {
  return y_ ? FieldSlice(x_, *y_, z_, std::move(values)) : FieldSlice(x_, z_, std::move(values));
}

FieldSlice FieldSlice::with_z(double z_m) const {
  FieldSlice out = *this;
  out.z_ = z_m;
  return out;
}

FieldSlice FieldSlice::row(double y_m) const {
  if (!y_) return *this;
  const std::size_t iy = y_->nearest_index(y_m);
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(iy * x_.count);
  return FieldSlice(x_, z_, std::vector<cplx>(first, first + static_cast<std::ptrdiff_t>(x_.count)));
}

std::vector<double> FieldSlice::intensity() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](cplx v) { return std::norm(v); });
  return out;
}

double total_power(const FieldSlice& slice) {
  double sum = 0.0;
  for (const cplx& v : slice.values()) sum += std::norm(v);
  return sum * slice.cell_measure();
}

namespace {

// Fraction of node i's cell [x_i - h/2, x_i + h/2] inside [lo, hi].
double cell_overlap(const Grid1D& g, std::size_t i, double lo, double hi) {
  const double c = g.coordinate(i);
  const double a = std::max(c - 0.5 * g.step_m, lo);
  const double b = std::min(c + 0.5 * g.step_m, hi);
  return b > a ? (b - a) / g.step_m : 0.0;
}

// Per-node weights along one axis, or empty if nothing overlaps.
std::vector<double> axis_weights(const Grid1D& g, double center, double width) {
  std::vector<double> w(g.count, 0.0);
  bool any = false;
  if (std::isinf(width)) {
    std::fill(w.begin(), w.end(), 1.0);
    return w;
  }
  const double lo = center - 0.5 * width;
  const double hi = center + 0.5 * width;
  for (std::size_t i = 0; i < g.count; ++i) {
    w[i] = cell_overlap(g, i, lo, hi);
    any = any || w[i] > 0.0;
  }
  if (!any) w.clear();
  return w;
}

}  // namespace

double window_power(const FieldSlice& slice, const Window& window) {
  if (!(window.x_width_m >= 0.0) || !(window.y_width_m >= 0.0)) {
    throw DomainError("window extents must be non-negative");
  }
  const auto wx = axis_weights(slice.x_grid(), window.x_center_m, window.x_width_m);
  if (wx.empty()) throw DomainError("window does not intersect the grid along x");
  std::vector<double> wy{1.0};
  if (slice.is_2d()) {
    wy = axis_weights(*slice.y_grid(), window.y_center_m, window.y_width_m);
    if (wy.empty()) throw DomainError("window does not intersect the grid along y");
  }
  const auto values = slice.values();
  double sum = 0.0;
  for (std::size_t iy = 0; iy < wy.size(); ++iy) {
    if (wy[iy] == 0.0) continue;
    double row = 0.0;
    for (std::size_t ix = 0; ix < wx.size(); ++ix) {
      if (wx[ix] != 0.0) row += wx[ix] * std::norm(values[iy * wx.size() + ix]);
    }
    sum += wy[iy] * row;
  }
  return sum * slice.cell_measure();
}

}  // namespace bendbeam
