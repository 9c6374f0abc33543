#pragma once

#include <complex>
#include <span>

namespace levymass {

enum class FftDirection { Forward, Backward };

/// Unnormalised in-place DFT. Forward uses e^{-2 pi i jk/n}.
/// Plans are cached per (length, direction); execution is thread-safe.
void fft_inplace(std::span<std::complex<double>> data, FftDirection direction);

}  // namespace levymass
