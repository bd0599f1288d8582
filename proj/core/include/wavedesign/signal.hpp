#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wavedesign {

using cvec = std::vector<std::complex<double>>;

/// Floor applied to every dB conversion in the library.
inline constexpr double kDbFloor = -120.0;

/// 20 log10(x / ref), floored at kDbFloor. Non-finite or non-positive
/// ratios map to the floor.
double amplitude_db(double x, double ref = 1.0);
/// 10 log10(x / ref), floored at kDbFloor.
double power_db(double x, double ref = 1.0);

/// Uniformly sampled complex baseband signal.
///
/// The carrier is metadata only; it is consulted by to_passband and by the
/// wideband Doppler model. Duration is always samples / sample_rate.
class SampledSignal {
 public:
  SampledSignal(cvec samples, double sample_rate_hz, double center_freq_hz = 0.0,
                bool constant_modulus = true);

  const cvec& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double sample_period_s() const noexcept { return 1.0 / sample_rate_hz_; }
  double center_freq_hz() const noexcept { return center_freq_hz_; }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }
  /// False for waveforms whose envelope is intentionally not constant
  /// (the geometric comb).
  bool constant_modulus() const noexcept { return constant_modulus_; }

  /// sum |s[n]|^2 dt
  double energy() const;
  /// Same samples with a different carrier annotation.
  SampledSignal with_center_freq(double center_freq_hz) const;

 private:
  cvec samples_;
  double sample_rate_hz_;
  double center_freq_hz_;
  bool constant_modulus_;
};

/// Two-sided baseband amplitude spectrum, S(f) = dt * DFT(s), on
/// [-fs/2, fs/2). Satisfies sum |S|^2 df = signal energy.
struct Spectrum {
  std::vector<double> freqs_hz;
  std::vector<double> magnitude;
  double total_energy = 0.0;
  double bin_width_hz = 0.0;
};

struct Spectrogram {
  std::vector<double> times_s;
  std::vector<double> freqs_hz;
  /// magnitude_db[frame][bin], 0 dB at the global maximum.
  std::vector<std::vector<double>> magnitude_db;
  std::size_t window_len_samples = 0;
  double overlap_fraction = 0.0;
};

/// Transform length is next_pow2(zero_pad_factor * size).
Spectrum spectrum(const SampledSignal& signal, std::size_t zero_pad_factor = 1);

/// Hann-windowed short-time transform. Hop is round(window_len * (1 - overlap)),
/// at least one sample; frames are taken from the start while they fit.
Spectrogram spectrogram(const SampledSignal& signal, std::size_t window_len,
                        double overlap);

/// Frequency interval [lo, hi] holding the central `fraction` of spectral
/// energy (equal tails on each side).
struct EnergyInterval {
  double lo_hz;
  double hi_hz;
  double width() const { return hi_hz - lo_hz; }
};
EnergyInterval energy_interval(const Spectrum& spec, double fraction);

/// Re{ s(t) exp(j 2 pi fc t) }. The occupied band is taken as the 99%-energy
/// interval of the baseband spectrum unless `occupied_half_bw_hz` is given.
std::vector<double> to_passband(const SampledSignal& signal,
                                double occupied_half_bw_hz = -1.0);

/// Band-limited evaluation of s(eta * (t - delay)) at t = n dt for
/// n < out_len, zero outside the waveform's support. Uses a Kaiser-windowed
/// sinc kernel; integer-sample delays with eta = 1 are copied exactly.
cvec delay_and_scale(const SampledSignal& signal, double delay_s, double eta,
                     std::size_t out_len);

/// Baseband equivalent of the time-scaled passband echo
///   sqrt(eta) s(eta t) exp(j 2 pi fc (eta - 1) t)
/// with the signal's carrier fc. Length is unchanged.
SampledSignal time_scale(const SampledSignal& signal, double eta);

}  // namespace wavedesign
