// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace bendbeam::detail {

/// In-place unnormalized DFT over a contiguous row-major array of shape
/// (rows, cols); rows == 1 gives a 1D transform. Forward uses exp(-j...).
/// Backed by FFTW; plans are cached per shape and execution is thread-safe.
void fft(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols, bool forward);

/// Smallest n >= min_n whose prime factors are 2, 3, 5 or 7.
std::size_t fft_friendly_size(std::size_t min_n);

}  // namespace bendbeam::detail
