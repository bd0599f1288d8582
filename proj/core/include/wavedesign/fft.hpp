#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wavedesign::fft {

using cvec = std::vector<std::complex<double>>;

/// Smallest power of two >= n (n = 0 maps to 1).
std::size_t next_pow2(std::size_t n);

/// Forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / L), where L = `length`.
/// Input is zero-padded (or truncated) to L.
cvec forward(std::span<const std::complex<double>> x, std::size_t length);

/// Inverse DFT including the 1/L factor.
cvec inverse(std::span<const std::complex<double>> x);

/// Reorders bins so that index 0 corresponds to -fs/2.
template <class T>
std::vector<T> shift(const std::vector<T>& bins) {
  const std::size_t n = bins.size();
  std::vector<T> out(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) out[i] = bins[(i + n - half) % n];
  return out;
}

}  // namespace wavedesign::fft
