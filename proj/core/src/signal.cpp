#include "wavedesign/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wavedesign/error.hpp"
#include "wavedesign/fft.hpp"

namespace wavedesign {

using detail::require;

double amplitude_db(double x, double ref) {
  const double r = x / ref;
  if (!(r > 0.0) || !std::isfinite(r)) return kDbFloor;
  return std::max(kDbFloor, 20.0 * std::log10(r));
}

double power_db(double x, double ref) {
  const double r = x / ref;
  if (!(r > 0.0) || !std::isfinite(r)) return kDbFloor;
  return std::max(kDbFloor, 10.0 * std::log10(r));
}

SampledSignal::SampledSignal(cvec samples, double sample_rate_hz, double center_freq_hz,
                             bool constant_modulus)
    : samples_(std::move(samples)),
      sample_rate_hz_(sample_rate_hz),
      center_freq_hz_(center_freq_hz),
      constant_modulus_(constant_modulus) {
  require(samples_.size() >= 2, "signal needs at least two samples");
  require(std::isfinite(sample_rate_hz_) && sample_rate_hz_ > 0.0,
          "sample rate must be positive");
  require(std::isfinite(center_freq_hz_) && center_freq_hz_ >= 0.0,
          "center frequency must be nonnegative");
  for (const auto& v : samples_) {
    require(std::isfinite(v.real()) && std::isfinite(v.imag()),
            "signal samples must be finite");
  }
}

double SampledSignal::energy() const {
  double e = 0.0;
  for (const auto& v : samples_) e += std::norm(v);
  return e / sample_rate_hz_;
}

SampledSignal SampledSignal::with_center_freq(double fc) const {
  return SampledSignal(samples_, sample_rate_hz_, fc, constant_modulus_);
}

Spectrum spectrum(const SampledSignal& signal, std::size_t zero_pad_factor) {
  require(zero_pad_factor >= 1, "zero_pad_factor must be >= 1");
  const std::size_t n = signal.size();
  const std::size_t len = fft::next_pow2(zero_pad_factor * n);
  const double dt = signal.sample_period_s();
  const double fs = signal.sample_rate_hz();

  cvec bins = fft::shift(fft::forward(signal.samples(), len));
  Spectrum out;
  out.bin_width_hz = fs / static_cast<double>(len);
  out.freqs_hz.resize(len);
  out.magnitude.resize(len);
  const double half = static_cast<double>(len / 2);
  for (std::size_t i = 0; i < len; ++i) {
    out.freqs_hz[i] = (static_cast<double>(i) - half) * out.bin_width_hz;
    out.magnitude[i] = std::abs(bins[i]) * dt;
  }
  out.total_energy = signal.energy();
  require(out.total_energy > 0.0, "signal has zero energy");
  return out;
}

Spectrogram spectrogram(const SampledSignal& signal, std::size_t window_len, double overlap) {
  require(window_len >= 2, "spectrogram window must be at least two samples");
  require(window_len <= signal.size(), "spectrogram window longer than signal");
  require(overlap >= 0.0 && overlap < 1.0, "overlap must lie in [0, 1)");

  const std::size_t hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(window_len) * (1.0 - overlap))));
  const std::size_t len = fft::next_pow2(window_len);
  const double fs = signal.sample_rate_hz();

  std::vector<double> window(window_len);
  for (std::size_t m = 0; m < window_len; ++m) {
    window[m] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) /
                                     static_cast<double>(window_len - 1));
  }

  Spectrogram out;
  out.window_len_samples = window_len;
  out.overlap_fraction = overlap;
  const double half = static_cast<double>(len / 2);
  out.freqs_hz.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.freqs_hz[i] = (static_cast<double>(i) - half) * fs / static_cast<double>(len);
  }

  const auto& s = signal.samples();
  std::vector<std::vector<double>> mags;
  double peak = 0.0;
  cvec frame(window_len);
  for (std::size_t start = 0; start + window_len <= s.size(); start += hop) {
    for (std::size_t m = 0; m < window_len; ++m) frame[m] = s[start + m] * window[m];
    cvec bins = fft::shift(fft::forward(frame, len));
    std::vector<double> row(len);
    for (std::size_t i = 0; i < len; ++i) {
      row[i] = std::abs(bins[i]);
      peak = std::max(peak, row[i]);
    }
    mags.push_back(std::move(row));
    out.times_s.push_back((static_cast<double>(start) + 0.5 * static_cast<double>(window_len)) /
                          fs);
  }
  out.magnitude_db.reserve(mags.size());
  for (auto& row : mags) {
    for (auto& v : row) v = amplitude_db(v, peak);
    out.magnitude_db.push_back(std::move(row));
  }
  return out;
}

EnergyInterval energy_interval(const Spectrum& spec, double fraction) {
  require(fraction > 0.0 && fraction <= 1.0, "energy fraction must lie in (0, 1]");
  const std::size_t n = spec.magnitude.size();
  require(n > 0, "empty spectrum");
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += spec.magnitude[i] * spec.magnitude[i];
    cum[i] = acc;
  }
  require(acc > 0.0, "spectrum has zero energy");
  const double tail = 0.5 * (1.0 - fraction) * acc;
  std::size_t lo = 0;
  while (lo + 1 < n && cum[lo] <= tail) ++lo;
  std::size_t hi = n - 1;
  while (hi > 0 && cum[hi - 1] >= acc - tail) --hi;
  return {spec.freqs_hz[lo] - 0.5 * spec.bin_width_hz, spec.freqs_hz[hi] + 0.5 * spec.bin_width_hz};
}

std::vector<double> to_passband(const SampledSignal& signal, double occupied_half_bw_hz) {
  const double fs = signal.sample_rate_hz();
  const double fc = signal.center_freq_hz();
  double half_bw = occupied_half_bw_hz;
  if (half_bw < 0.0) {
    const auto band = energy_interval(spectrum(signal, 1), 0.99);
    half_bw = std::max(std::abs(band.lo_hz), std::abs(band.hi_hz));
  }
  require(fc + half_bw < 0.5 * fs,
          "carrier plus occupied half-bandwidth exceeds the Nyquist frequency");
  const auto& s = signal.samples();
  std::vector<double> out(s.size());
  const double w = 2.0 * std::numbers::pi * fc / fs;
  for (std::size_t n = 0; n < s.size(); ++n) {
    out[n] = (s[n] * std::polar(1.0, w * static_cast<double>(n))).real();
  }
  return out;
}

namespace {

constexpr int kSincHalfWidth = 32;
constexpr double kKaiserBeta = 8.6;

double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double kaiser_sinc(double x) {
  const double ax = std::abs(x);
  if (ax >= kSincHalfWidth) return 0.0;
  const double r = ax / kSincHalfWidth;
  const double win = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / bessel_i0(kKaiserBeta);
  if (ax < 1e-12) return win;
  const double px = std::numbers::pi * x;
  return win * std::sin(px) / px;
}

}  // namespace

cvec delay_and_scale(const SampledSignal& signal, double delay_s, double eta,
                     std::size_t out_len) {
  require(std::isfinite(delay_s), "delay must be finite");
  require(std::isfinite(eta) && eta > 0.0, "time-scale factor must be positive");
  const auto& s = signal.samples();
  const double fs = signal.sample_rate_hz();
  const auto n_src = static_cast<long>(s.size());
  cvec out(out_len);

  const double shift = delay_s * fs;
  const double rounded = std::round(shift);
  if (eta == 1.0 && std::abs(shift - rounded) < 1e-9) {
    const auto d = static_cast<long>(rounded);
    for (std::size_t n = 0; n < out_len; ++n) {
      const long k = static_cast<long>(n) - d;
      if (k >= 0 && k < n_src) out[n] = s[static_cast<std::size_t>(k)];
    }
    return out;
  }

  for (std::size_t n = 0; n < out_len; ++n) {
    // source position in samples
    const double x = eta * (static_cast<double>(n) - shift);
    if (x <= -1.0 || x >= static_cast<double>(n_src)) continue;
    const long k0 = static_cast<long>(std::floor(x));
    std::complex<double> acc{};
    for (long k = k0 - kSincHalfWidth + 1; k <= k0 + kSincHalfWidth; ++k) {
      if (k < 0 || k >= n_src) continue;
      acc += s[static_cast<std::size_t>(k)] * kaiser_sinc(x - static_cast<double>(k));
    }
    out[n] = acc;
  }
  return out;
}

SampledSignal time_scale(const SampledSignal& signal, double eta) {
  cvec y = delay_and_scale(signal, 0.0, eta, signal.size());
  const double fs = signal.sample_rate_hz();
  const double w = 2.0 * std::numbers::pi * signal.center_freq_hz() * (eta - 1.0) / fs;
  const double gain = std::sqrt(eta);
  for (std::size_t n = 0; n < y.size(); ++n) y[n] *= gain * std::polar(1.0, w * static_cast<double>(n));
  return SampledSignal(std::move(y), fs, signal.center_freq_hz(), false);
}

}  // namespace wavedesign
