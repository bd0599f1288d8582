#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavedesign/error.hpp"
#include "wavedesign/fft.hpp"
#include "wavedesign/metrics.hpp"

namespace wavedesign {

using detail::require;

namespace {

// R[m] = dt * sum_n a[n] conj(b[n + m]) for m in [-(na-1), nb-1], divided by norm.
CorrelationResponse correlate(const cvec& a, const cvec& b, double fs, double norm) {
  const std::size_t na = a.size(), nb = b.size();
  const std::size_t len = fft::next_pow2(na + nb - 1);
  cvec fa = fft::forward(a, len);
  const cvec fb = fft::forward(b, len);
  for (std::size_t k = 0; k < len; ++k) fa[k] = std::conj(fa[k]) * fb[k];
  // d[m] = sum_n conj(a[n]) b[n + m], so R = conj(d)
  const cvec d = fft::inverse(fa);

  const double dt = 1.0 / fs;
  const double scale = dt / norm;
  CorrelationResponse out;
  out.lag_step_s = dt;
  const std::size_t count = na + nb - 1;
  out.lags_s.resize(count);
  out.values.resize(count);
  out.magnitude_db.resize(count);
  out.zero_index = na - 1;
  for (std::size_t i = 0; i < count; ++i) {
    const long m = static_cast<long>(i) - static_cast<long>(na - 1);
    const std::size_t idx = m >= 0 ? static_cast<std::size_t>(m) : len - static_cast<std::size_t>(-m);
    out.lags_s[i] = static_cast<double>(m) * dt;
    out.values[i] = std::conj(d[idx]) * scale;
    out.magnitude_db[i] = amplitude_db(std::abs(out.values[i]));
  }
  return out;
}

}  // namespace

CorrelationResponse cross_correlation(const SampledSignal& a, const SampledSignal& b) {
  require(a.sample_rate_hz() == b.sample_rate_hz(),
          "cross-correlation requires equal sample rates");
  const double ea = a.energy(), eb = b.energy();
  require(ea > 0.0 && eb > 0.0, "cross-correlation of a zero-energy signal");
  return correlate(a.samples(), b.samples(), a.sample_rate_hz(), std::sqrt(ea * eb));
}

CorrelationResponse autocorrelation(const SampledSignal& s) { return cross_correlation(s, s); }

CorrelationResponse doppler_cut(const SampledSignal& signal, double doppler_hz) {
  const double e = signal.energy();
  require(e > 0.0, "zero-energy signal");
  const double fs = signal.sample_rate_hz();
  const auto& s = signal.samples();
  if (doppler_hz == 0.0) return correlate(s, s, fs, e);
  cvec shifted(s.size());
  const double w = 2.0 * std::numbers::pi * doppler_hz / fs;
  for (std::size_t n = 0; n < s.size(); ++n)
    shifted[n] = s[n] * std::polar(1.0, w * static_cast<double>(n));
  return correlate(shifted, s, fs, e);
}

double parabolic_peak_offset(double left, double center, double right) {
  const double denom = left - 2.0 * center + right;
  if (!(std::abs(denom) > 0.0)) return 0.0;
  const double off = 0.5 * (left - right) / denom;
  return std::clamp(off, -0.5, 0.5);
}

}  // namespace wavedesign
