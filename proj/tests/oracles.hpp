#pragma once
// Slow, obviously-correct references the fast paths are checked against.

#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "wavedesign/signal.hpp"

namespace oracle {

using cd = std::complex<double>;

/// R(m) = sum_n a[n] conj(b[n + m]) dt / sqrt(Ea Eb), m = -(Na - 1) .. Nb - 1.
inline std::vector<cd> direct_correlation(const std::vector<cd>& a, const std::vector<cd>& b,
                                          double dt) {
  double ea = 0, eb = 0;
  for (auto v : a) ea += std::norm(v) * dt;
  for (auto v : b) eb += std::norm(v) * dt;
  const long na = static_cast<long>(a.size()), nb = static_cast<long>(b.size());
  std::vector<cd> r;
  for (long m = -(na - 1); m <= nb - 1; ++m) {
    cd acc = 0;
    for (long n = 0; n < na; ++n) {
      const long j = n + m;
      if (j >= 0 && j < nb) acc += a[n] * std::conj(b[j]);
    }
    r.push_back(acc * dt / std::sqrt(ea * eb));
  }
  return r;
}

/// Direct DFT at arbitrary frequency, dt * sum s[n] exp(-j 2 pi f n dt).
inline cd dtft(const std::vector<cd>& s, double dt, double f) {
  cd acc = 0;
  for (std::size_t n = 0; n < s.size(); ++n)
    acc += s[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(n) * dt);
  return acc * dt;
}

/// Costas property by definition: all displacement vectors between pairs of
/// dots are distinct. O(N^4).
inline bool costas_bruteforce(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (c == d || (a == c && b == d)) continue;
          if (b - a == d - c && p[b] - p[a] == p[d] - p[c]) return false;
        }
    }
  return true;
}

/// Unwrapped phase-difference frequency estimate between samples n and n+1.
inline std::vector<double> phase_difference_frequency(const std::vector<cd>& s, double fs) {
  std::vector<double> f;
  for (std::size_t n = 0; n + 1 < s.size(); ++n)
    f.push_back(std::arg(s[n + 1] * std::conj(s[n])) * fs / (2.0 * std::numbers::pi));
  return f;
}

inline double db20(double x) { return 20.0 * std::log10(x); }

}  // namespace oracle
