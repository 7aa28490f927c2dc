// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/codeword.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "bendbeam/error.hpp"

namespace bendbeam {

double ArrayConfig::x_at(std::size_t i) const noexcept {
  return (static_cast<double>(i) - static_cast<double>(nx) + 1.0) * spacing_m;
}

double ArrayConfig::y_at(std::size_t j) const noexcept {
  return (static_cast<double>(j) - 0.5 * static_cast<double>(ny - 1)) * spacing_m;
}

std::size_t ArrayConfig::active_count() const noexcept {
  if (active_mask.empty()) return nx;
  return static_cast<std::size_t>(std::count(active_mask.begin(), active_mask.end(), true));
}

void validate(const ArrayConfig& cfg) {
  if (!(cfg.spacing_m > 0.0) || !std::isfinite(cfg.spacing_m)) throw DomainError("array spacing must be positive");
  if (cfg.nx == 0 || cfg.ny == 0) throw DomainError("array needs at least one element per axis");
  if (cfg.bit_depth && *cfg.bit_depth < 1) throw DomainError("bit depth must be >= 1");
  if (!cfg.active_mask.empty() && cfg.active_mask.size() != cfg.nx)
    throw DomainError("active mask size does not match the column count");
  if (cfg.active_count() == 0) throw DomainError("array has no active element");
}

ArrayConfig array_for_aperture(double lx_m, double spacing_m, std::size_t ny) {
  if (!(lx_m >= 0.0) || !(spacing_m > 0.0)) throw DomainError("array_for_aperture: bad geometry");
  ArrayConfig cfg;
  cfg.spacing_m = spacing_m;
  cfg.nx = static_cast<std::size_t>(std::floor(lx_m / spacing_m + 1e-9)) + 1;
  cfg.ny = ny;
  return cfg;
}

std::vector<double> sample_phase(const PhaseProfile& profile, const ArrayConfig& cfg) {
  validate(cfg);
  std::vector<double> out(cfg.nx);
  for (std::size_t i = 0; i < cfg.nx; ++i) out[i] = profile.at(cfg.x_at(i));
  return out;
}

double Codeword::norm() const noexcept {
  double s = 0.0;
  for (const cplx& w : weights) s += std::norm(w);
  return std::sqrt(s);
}

Codeword make_codeword(const std::vector<double>& phases, const ArrayConfig& cfg) {
  validate(cfg);
  if (phases.size() != cfg.nx) throw DomainError("phase count does not match the column count");
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.nx));
  Codeword cw;
  cw.weights.resize(cfg.nx);
  for (std::size_t i = 0; i < cfg.nx; ++i) {
    if (!std::isfinite(phases[i])) throw DomainError("non-finite element phase");
    cw.weights[i] = cfg.active(i) ? std::polar(scale, phases[i]) : cplx(0.0);
  }
  return cw;
}

std::vector<double> quantize_phases(const std::vector<double>& phases, int bit_depth) {
  if (bit_depth < 1 || bit_depth > 30) throw DomainError("bit depth must be in [1, 30]");
  const long long levels = 1LL << bit_depth;
  const double q = 2.0 * kPi / static_cast<double>(levels);
  std::vector<double> out(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    double w = std::fmod(phases[i], 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    const auto m = static_cast<long long>(std::ceil(w / q - 0.5));
    out[i] = static_cast<double>(((m % levels) + levels) % levels) * q;
  }
  return out;
}

namespace {

// Unbiased draw in [0, bound) from raw 64-bit output; std distributions are
// implementation-defined and would break cross-platform reproducibility.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace

std::vector<bool> random_subarray_mask(const ArrayConfig& cfg, double fraction_active, std::uint64_t seed) {
  if (!(fraction_active > 0.0 && fraction_active <= 1.0)) throw DomainError("active fraction must be in (0, 1]");
  if (cfg.nx == 0) throw DomainError("array has no columns");
  const auto keep = static_cast<std::size_t>(std::llround(fraction_active * static_cast<double>(cfg.nx)));
  if (keep == 0) throw DomainError("active fraction leaves no element on");
  std::vector<std::size_t> idx(cfg.nx);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, cfg.nx - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> mask(cfg.nx, false);
  for (std::size_t i = 0; i < keep; ++i) mask[idx[i]] = true;
  return mask;
}

std::vector<GratingOrder> grating_orders(double spacing_m, const Medium& medium) {
  if (!(spacing_m > 0.0)) throw DomainError("element spacing must be positive");
  const double ratio = medium.wavelength_m / spacing_m;
  std::vector<GratingOrder> out;
  const auto mmax = static_cast<int>(std::floor(1.0 / ratio));
  for (int m = -mmax; m <= mmax; ++m) {
    const double s = m * ratio;
    if (m == 0 || !(std::abs(s) < 1.0)) continue;
    out.push_back({m, std::asin(s), 2.0 * kPi * m / spacing_m});
  }
  return out;
}

namespace {

struct Deposit {
  std::size_t node;
  std::size_t element;
  double weight;
};

// Node/element couplings along one axis. `position(e)` is the element
// coordinate; point elements spread d/dx over the two neighbouring nodes.
template <class Pos>
std::vector<Deposit> deposits(const Grid1D& g, std::size_t count, double d, ElementModel model, Pos position) {
  std::vector<Deposit> out;
  if (model == ElementModel::point) {
    const double scale = d / g.step_m;
    for (std::size_t e = 0; e < count; ++e) {
      const double t = (position(e) - g.start_m) / g.step_m;
      const double fl = std::floor(t + 1e-9);
      const double frac = std::max(0.0, t - fl);
      const auto i = static_cast<long long>(fl);
      if (i >= 0 && i < static_cast<long long>(g.count))
        out.push_back({static_cast<std::size_t>(i), e, scale * (1.0 - frac)});
      if (frac > 0.0 && i + 1 >= 0 && i + 1 < static_cast<long long>(g.count))
        out.push_back({static_cast<std::size_t>(i + 1), e, scale * frac});
    }
  } else {
    // Cells [x_e - d/2, x_e + d/2) tile the array; a node on a cell edge
    // belongs to the cell on its right, decided in units of d so that
    // rounding never hands it to two elements.
    const double x_first = position(0);
    for (std::size_t i = 0; i < g.count; ++i) {
      const double e = std::floor((g.coordinate(i) - x_first) / d + 0.5 + 1e-9);
      if (e >= 0.0 && e < static_cast<double>(count)) out.push_back({i, static_cast<std::size_t>(e), 1.0});
    }
  }
  return out;
}

void check_grid(const Grid1D& g, const ArrayConfig& cfg) {
  if (g.step_m > 0.5 * cfg.spacing_m * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "grid step " << g.step_m << " m is coarser than half the element spacing " << cfg.spacing_m << " m";
    throw DomainError(msg.str());
  }
}

}  // namespace

FieldSlice element_field(const Codeword& codeword, const ArrayConfig& cfg, const AmplitudeWindow& window,
                         const Grid1D& x) {
  validate(cfg);
  check_grid(x, cfg);
  if (codeword.weights.size() != cfg.nx) throw DomainError("codeword size does not match the column count");
  const double gain = std::sqrt(static_cast<double>(cfg.nx));
  std::vector<cplx> v(x.count, cplx(0.0));
  for (const Deposit& dp : deposits(x, cfg.nx, cfg.spacing_m, cfg.model, [&](std::size_t e) { return cfg.x_at(e); })) {
    v[dp.node] += dp.weight * gain * codeword.weights[dp.element] * window.amplitude(cfg.x_at(dp.element));
  }
  return FieldSlice(x, 0.0, std::move(v));
}

FieldSlice element_field(const Codeword& codeword, const ArrayConfig& cfg, const AmplitudeWindow& window,
                         const Grid1D& x, const Grid1D& y) {
  validate(cfg);
  check_grid(x, cfg);
  check_grid(y, cfg);
  if (codeword.weights.size() != cfg.nx) throw DomainError("codeword size does not match the column count");
  const double gain = std::sqrt(static_cast<double>(cfg.nx));
  const auto dx = deposits(x, cfg.nx, cfg.spacing_m, cfg.model, [&](std::size_t e) { return cfg.x_at(e); });
  const auto dy = deposits(y, cfg.ny, cfg.spacing_m, cfg.model, [&](std::size_t e) { return cfg.y_at(e); });
  std::vector<cplx> v(x.count * y.count, cplx(0.0));
  for (const Deposit& b : dy) {
    const double yb = cfg.y_at(b.element);
    for (const Deposit& a : dx) {
      v[b.node * x.count + a.node] +=
          a.weight * b.weight * gain * codeword.weights[a.element] * window.amplitude(cfg.x_at(a.element), yb);
    }
  }
  return FieldSlice(x, y, 0.0, std::move(v));
}

void write_codeword_csv(std::ostream& out, const Codeword& codeword, const ArrayConfig& cfg) {
  out << "element_index,x_m,amplitude,phase_rad,active\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < codeword.weights.size(); ++i) {
    const cplx w = codeword.weights[i];
    line.str("");
    line << (static_cast<long long>(i) - static_cast<long long>(cfg.nx) + 1) << ',' << cfg.x_at(i) << ','
         << std::abs(w) << ',' << (cfg.active(i) ? std::arg(w) : 0.0) << ',' << (cfg.active(i) ? 1 : 0) << '\n';
    out << line.str();
  }
}

}  // namespace bendbeam
