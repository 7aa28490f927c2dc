// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace bendbeam::detail {
namespace {

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))), size(n) {
    if (!ptr) throw std::bad_alloc();
  }
  ~AlignedBuffer() { fftw_free(ptr); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;

  fftw_complex* ptr;
  std::size_t size;
};

struct Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans are created on aligned scratch and executed on aligned copies with
// fftw_execute_dft, so every run of a shape follows the same code path.
const Plan& plan_for(std::size_t rows, std::size_t cols, bool forward) {
  using Key = std::tuple<std::size_t, std::size_t, bool>;
  static std::map<Key, std::unique_ptr<Plan>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[Key{rows, cols, forward}];
  if (!slot) {
    slot = std::make_unique<Plan>();
    AlignedBuffer scratch(rows * cols);
    const int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
    if (rows == 1) {
      slot->plan = fftw_plan_dft_1d(static_cast<int>(cols), scratch.ptr, scratch.ptr, sign, FFTW_ESTIMATE);
    } else {
      slot->plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), scratch.ptr, scratch.ptr,
                                    sign, FFTW_ESTIMATE);
    }
    if (!slot->plan) throw std::runtime_error("FFTW failed to create a plan");
  }
  return *slot;
}

}  // namespace

void fft(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols, bool forward) {
  if (data.size() != rows * cols) throw std::invalid_argument("fft: shape does not match data");
  const Plan& p = plan_for(rows, cols, forward);
  AlignedBuffer work(data.size());
  auto* w = reinterpret_cast<std::complex<double>*>(work.ptr);
  std::copy(data.begin(), data.end(), w);
  fftw_execute_dft(p.plan, work.ptr, work.ptr);
  std::copy(w, w + data.size(), data.begin());
}

std::size_t fft_friendly_size(std::size_t min_n) {
  for (std::size_t n = std::max<std::size_t>(min_n, 2);; ++n) {
    std::size_t m = n;
    for (std::size_t p : {2u, 3u, 5u, 7u}) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) return n;
  }
}

}  // namespace bendbeam::detail
