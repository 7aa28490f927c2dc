// SPDX-License-Identifier: Apache-2.0
#include "bendbeam/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bendbeam/error.hpp"
#include "fft.hpp"

namespace bendbeam {
namespace {

double signed_k(std::size_t i, std::size_t n, double dk) {
  const auto ii = static_cast<long long>(i);
  const auto nn = static_cast<long long>(n);
  return dk * static_cast<double>(ii < (nn + 1) / 2 ? ii : ii - nn);
}

}  // namespace

Spectrum::Spectrum(Grid1D x, std::optional<Grid1D> y, double z_m, Medium medium, std::vector<cplx> coeffs)
    : x_(x), y_(y), z_(z_m), medium_(medium), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != nx() * ny()) throw DomainError("spectrum size does not match its grid");
}

double Spectrum::dkx() const noexcept { return 2.0 * kPi / x_.period(); }
double Spectrum::dky() const noexcept { return y_ ? 2.0 * kPi / y_->period() : 0.0; }
double Spectrum::kx(std::size_t i) const noexcept { return signed_k(i, nx(), dkx()); }
double Spectrum::ky(std::size_t j) const noexcept { return y_ ? signed_k(j, ny(), dky()) : 0.0; }

bool Spectrum::propagating(std::size_t i, std::size_t j) const noexcept {
  const double k = medium_.wavenumber_rad_per_m;
  const double a = kx(i), b = ky(j);
  return a * a + b * b < k * k;
}

double Spectrum::power() const noexcept {
  double sum = 0.0;
  for (const cplx& c : coeffs_) sum += std::norm(c);
  double measure = dkx() / (2.0 * kPi);
  if (y_) measure *= dky() / (2.0 * kPi);
  return sum * measure;
}

double Spectrum::propagating_power() const noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < ny(); ++j) {
    for (std::size_t i = 0; i < nx(); ++i) {
      if (propagating(i, j)) sum += std::norm(coeffs_[j * nx() + i]);
    }
  }
  double measure = dkx() / (2.0 * kPi);
  if (y_) measure *= dky() / (2.0 * kPi);
  return sum * measure;
}

Spectrum to_spectrum(const FieldSlice& slice, const Medium& medium) {
  const Grid1D& gx = slice.x_grid();
  const std::size_t nx = gx.count, ny = slice.ny();
  std::vector<cplx> c(slice.values().begin(), slice.values().end());
  detail::fft(c, ny, nx, true);

  const double dkx = 2.0 * kPi / gx.period();
  const double dky = slice.is_2d() ? 2.0 * kPi / slice.y_grid()->period() : 0.0;
  const double y0 = slice.is_2d() ? slice.y_grid()->start_m : 0.0;
  const double cell = slice.cell_measure();
  std::vector<cplx> shift_x(nx);
  for (std::size_t i = 0; i < nx; ++i) shift_x[i] = std::polar(cell, -signed_k(i, nx, dkx) * gx.start_m);
  for (std::size_t j = 0; j < ny; ++j) {
    const cplx sy = std::polar(1.0, -signed_k(j, ny, dky) * y0);
    for (std::size_t i = 0; i < nx; ++i) c[j * nx + i] *= shift_x[i] * sy;
  }
  return Spectrum(gx, slice.y_grid(), slice.z(), medium, std::move(c));
}

FieldSlice from_spectrum(const Spectrum& spectrum, double z_m, const PropagationOptions& options) {
  const Grid1D& gx = spectrum.x_grid();
  const std::size_t nx = spectrum.nx(), ny = spectrum.ny();
  const double k = spectrum.medium().wavenumber_rad_per_m;
  const double dz = z_m - spectrum.z();
  const double half_x = 0.5 * gx.period();
  const double half_y = spectrum.y_grid() ? 0.5 * spectrum.y_grid()->period() : 0.0;
  const double y0 = spectrum.y_grid() ? spectrum.y_grid()->start_m : 0.0;
  const double cell = spectrum.y_grid() ? gx.step_m * spectrum.y_grid()->step_m : gx.step_m;
  const double inv = 1.0 / (cell * static_cast<double>(nx * ny));

  std::vector<cplx> c = spectrum.coefficients();
  for (std::size_t j = 0; j < ny; ++j) {
    const double ky = spectrum.ky(j);
    for (std::size_t i = 0; i < nx; ++i) {
      const double kx = spectrum.kx(i);
      const double kt2 = kx * kx + ky * ky;
      cplx transfer;
      if (kt2 < k * k) {
        const double kz = std::sqrt(k * k - kt2);
        const bool walks_out = options.band_limit && dz != 0.0 &&
                               (std::abs(dz) * std::abs(kx) > half_x * kz ||
                                (spectrum.y_grid() && std::abs(dz) * std::abs(ky) > half_y * kz));
        transfer = walks_out ? cplx(0.0) : std::polar(1.0, kz * dz);
      } else {
        transfer = cplx(std::exp(-std::sqrt(kt2 - k * k) * std::abs(dz)), 0.0);
      }
      c[j * nx + i] *= transfer * std::polar(inv, kx * gx.start_m + ky * y0);
    }
  }
  detail::fft(c, ny, nx, false);
  if (spectrum.y_grid()) return FieldSlice(gx, *spectrum.y_grid(), z_m, std::move(c));
  return FieldSlice(gx, z_m, std::move(c));
}

FieldSlice apply_blocker(const FieldSlice& slice, const Blocker& blocker) {
  if (!(blocker.width_m >= 0.0)) throw DomainError("blocker width must be non-negative");
  std::vector<cplx> v(slice.values().begin(), slice.values().end());
  const Grid1D& gx = slice.x_grid();
  const double r = 0.5 * blocker.width_m;
  if (!slice.is_2d()) {
    for (std::size_t i = 0; i < gx.count; ++i) {
      if (std::abs(gx.coordinate(i) - blocker.center_x_m) < r) v[i] = 0.0;
    }
  } else {
    const Grid1D& gy = *slice.y_grid();
    for (std::size_t j = 0; j < gy.count; ++j) {
      const double dy = gy.coordinate(j) - blocker.center_y_m;
      for (std::size_t i = 0; i < gx.count; ++i) {
        const double dx = gx.coordinate(i) - blocker.center_x_m;
        if (dx * dx + dy * dy < r * r) v[j * gx.count + i] = 0.0;
      }
    }
  }
  return slice.with_values(std::move(v));
}

BorderLeakError::BorderLeakError(double z_m, double fraction)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "power reached the transform border at z = " << z_m << " m (share " << fraction
            << "); enlarge the domain or padding";
        return msg.str();
      }()),
      z_(z_m),
      fraction_(fraction) {}

double border_power_fraction(const FieldSlice& slice, double border_fraction) {
  const double total = total_power(slice);
  if (total == 0.0) return 0.0;
  const std::size_t nx = slice.nx(), ny = slice.ny();
  const auto bx = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(border_fraction * static_cast<double>(nx))));
  const auto by = slice.is_2d()
                      ? std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(border_fraction * static_cast<double>(ny))))
                      : 0;
  const auto v = slice.values();
  double edge = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    const bool edge_row = slice.is_2d() && (j < by || j >= ny - by);
    for (std::size_t i = 0; i < nx; ++i) {
      if (edge_row || i < bx || i >= nx - bx) edge += std::norm(v[j * nx + i]);
    }
  }
  return edge * slice.cell_measure() / total;
}

AngularSpectrumEngine::AngularSpectrumEngine(const FieldSlice& source, const Medium& medium,
                                             PropagationOptions options)
    : spectrum_(to_spectrum(source, medium)), medium_(medium), options_(options) {}

FieldSlice AngularSpectrumEngine::checked(FieldSlice slice) const {
  if (options_.border == BorderPolicy::enforce) {
    const double f = border_power_fraction(slice, options_.border_fraction);
    if (f > options_.border_threshold) throw BorderLeakError(slice.z(), f);
  }
  return slice;
}

FieldSlice AngularSpectrumEngine::propagate(double z_m) const {
  return checked(from_spectrum(spectrum_, z_m, options_));
}

std::vector<FieldSlice> AngularSpectrumEngine::scan(const std::vector<double>& z_list,
                                                    std::vector<Blocker> blockers) const {
  std::vector<FieldSlice> out;
  out.reserve(z_list.size());
  scan_each(z_list, std::move(blockers), [&](const FieldSlice& s) { out.push_back(s); });
  return out;
}

void AngularSpectrumEngine::scan_each(const std::vector<double>& z_list, std::vector<Blocker> blockers,
                                      const std::function<void(const FieldSlice&)>& sink) const {
  if (z_list.empty()) throw DomainError("scan needs at least one z plane");
  for (std::size_t i = 1; i < z_list.size(); ++i) {
    if (!(z_list[i] >= z_list[i - 1])) throw DomainError("scan z list must be ascending");
  }
  std::stable_sort(blockers.begin(), blockers.end(),
                   [](const Blocker& a, const Blocker& b) { return a.z_m < b.z_m; });
  for (const Blocker& b : blockers) {
    if (!(b.z_m > spectrum_.z()) || b.z_m > z_list.back()) {
      std::ostringstream msg;
      msg << "blocker at z = " << b.z_m << " m lies outside (" << spectrum_.z() << ", " << z_list.back() << "]";
      throw DomainError(msg.str());
    }
  }

  // A zero-width blocker masks nothing; skipping it keeps the output bit-identical.
  std::erase_if(blockers, [](const Blocker& b) { return b.width_m == 0.0; });

  std::optional<Spectrum> blocked;
  std::size_t next = 0;
  for (double z : z_list) {
    while (next < blockers.size() && blockers[next].z_m <= z) {
      const Spectrum& current = blocked ? *blocked : spectrum_;
      const FieldSlice at_blocker = from_spectrum(current, blockers[next].z_m, options_);
      blocked = to_spectrum(apply_blocker(at_blocker, blockers[next]), medium_);
      ++next;
    }
    sink(checked(from_spectrum(blocked ? *blocked : spectrum_, z, options_)));
  }
}

std::vector<FieldSlice> propagate_scan(const FieldSlice& source, const Medium& medium,
                                       const std::vector<double>& z_list, const std::vector<Blocker>& blockers,
                                       const PropagationOptions& options) {
  return AngularSpectrumEngine(source, medium, options).scan(z_list, blockers);
}

DomainPlan plan_domain(double lo_m, double hi_m, std::optional<double> y_half_m, const Medium& medium,
                       const DomainOptions& options) {
  if (!(hi_m > lo_m)) throw DomainError("domain range is empty");
  if (!(options.padding_factor >= 1.0)) throw DomainError("padding factor must be >= 1");
  if (!(options.step_wavelengths > 0.0)) throw DomainError("grid step must be positive");
  const double step = options.step_wavelengths * medium.wavelength_m;

  auto padded_axis = [&](double a, double b) {
    const auto first = static_cast<long long>(std::floor(a / step));
    const auto last = static_cast<long long>(std::ceil(b / step));
    const auto occupied = static_cast<std::size_t>(last - first + 1);
    const std::size_t n = detail::fft_friendly_size(
        static_cast<std::size_t>(std::ceil(options.padding_factor * static_cast<double>(occupied))));
    const auto pad = static_cast<long long>((n - occupied) / 2);
    return make_grid(static_cast<double>(first - pad) * step, step, n);
  };

  DomainPlan plan{padded_axis(lo_m, hi_m), std::nullopt, lo_m, hi_m, 0};
  std::size_t nodes = plan.x.count;
  if (y_half_m) {
    plan.y = padded_axis(-*y_half_m, *y_half_m);
    nodes *= plan.y->count;
  }
  plan.memory_bytes = nodes * sizeof(cplx) * options.slices_in_memory;
  if (plan.memory_bytes > options.memory_cap_bytes) {
    std::ostringstream msg;
    msg << "domain of " << plan.x.count << (plan.y ? " x " + std::to_string(plan.y->count) : std::string())
        << " nodes needs " << static_cast<double>(plan.memory_bytes) / (1 << 20) << " MiB, cap is "
        << static_cast<double>(options.memory_cap_bytes) / (1 << 20) << " MiB";
    throw ResourceError(msg.str(), plan.memory_bytes, options.memory_cap_bytes);
  }
  return plan;
}

DomainPlan auto_domain(const AmplitudeWindow& aperture, const std::optional<ParabolicTrajectory>& traj,
                       double z_max_request_m, const Medium& medium, const DomainOptions& options) {
  if (!(z_max_request_m >= 0.0)) throw DomainError("auto_domain: z request must be non-negative");
  double lo = aperture.x_min_m, hi = aperture.x_max_m;
  double margin = options.min_margin_m;
  if (traj) {
    margin = std::max(margin, options.margin_fwhm * airy_fwhm(traj->beta_per_m, medium));
    constexpr int kSamples = 512;
    for (int i = 0; i <= kSamples; ++i) {
      const double z = z_max_request_m * i / kSamples;
      lo = std::min(lo, traj->x_at(z));
      hi = std::max(hi, traj->x_at(z));
    }
  }
  lo -= margin + options.extra_lateral_m;
  hi += margin + options.extra_lateral_m;
  std::optional<double> y_half;
  if (options.three_d) y_half = 0.5 * aperture.y_width_m + margin;
  return plan_domain(lo, hi, y_half, medium, options);
}

}  // namespace bendbeam
