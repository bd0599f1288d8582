#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavedesign/costas.hpp"
#include "wavedesign/signal.hpp"

namespace wavedesign {

/// Phase-domain harmonic coefficients of an MTSFM waveform:
///   phi(t) = sum_k alpha_k cos(2 pi k t / T) + beta_k sin(2 pi k t / T).
struct MtsfmParameters {
  std::vector<double> alpha;
  std::vector<double> beta;
  double duration_s = 1.0;

  MtsfmParameters() = default;
  MtsfmParameters(std::vector<double> alpha, std::vector<double> beta, double duration_s);
  /// K zero harmonics.
  static MtsfmParameters zeros(std::size_t num_harmonics, double duration_s);
  /// Inverse of flatten(): first half alpha, second half beta.
  static MtsfmParameters from_flat(std::span<const double> x, double duration_s);

  std::size_t num_harmonics() const noexcept { return alpha.size(); }
  std::vector<double> flatten() const;
  /// Throws InvalidInput on K = 0, mismatched sizes, non-finite values.
  void validate() const;
};

enum class WaveformKind { CW, LFM, HFM, CostasFSK, P4, GeometricComb, MTSFM };

const char* to_string(WaveformKind kind);
WaveformKind waveform_kind_from_string(const std::string& name);

/// Everything needed to synthesize any waveform in the bank.
struct WaveformSpec {
  WaveformKind kind = WaveformKind::LFM;
  double bandwidth_hz = 256.0;
  double duration_s = 1.0;
  /// Zero selects the default of 8 x bandwidth.
  double sample_rate_hz = 0.0;
  double center_freq_hz = 0.0;

  // HFM: band edges. Zero selects [fc - B/2, fc + B/2] with fc defaulting to B.
  double hfm_f1_hz = 0.0;
  double hfm_f2_hz = 0.0;
  // Costas
  std::optional<CostasCode> costas;
  // P4: zero selects round(B * T) chips.
  std::size_t chips = 0;
  // Geometric comb
  std::size_t comb_tones = 4;
  double comb_ratio = 2.0;
  // MTSFM
  std::optional<MtsfmParameters> mtsfm;

  double tbp() const { return bandwidth_hz * duration_s; }
  double effective_sample_rate() const;
  void validate() const;
};

SampledSignal synth_cw(double duration_s, double fs);
SampledSignal synth_lfm(double bandwidth_hz, double duration_s, double fs);
/// Hyperbolic sweep f1 -> f2, mixed to baseband about (f1 + f2) / 2, which
/// becomes the signal's carrier annotation.
SampledSignal synth_hfm(double f1_hz, double f2_hz, double duration_s, double fs);
/// Chip i sits at (code[i] - (N+1)/2) / (T/N) Hz; phase is continuous.
SampledSignal synth_costas_fsk(const CostasCode& code, double bandwidth_hz,
                               double duration_s, double fs);
/// P4 phase of chip n (1-based).
double p4_phase(std::size_t n, std::size_t num_chips);
SampledSignal synth_p4(std::size_t num_chips, double bandwidth_hz, double duration_s,
                       double fs);
/// Tone frequencies f0 * r^m, m = 0..M-1, with the span f0 (r^(M-1) - 1) = B.
std::vector<double> geometric_comb_tones(std::size_t num_tones, double ratio,
                                         double bandwidth_hz);
SampledSignal synth_geometric_comb(std::size_t num_tones, double ratio,
                                   double bandwidth_hz, double duration_s, double fs);
SampledSignal synth_mtsfm(const MtsfmParameters& params, double fs);

/// phi(t) at arbitrary t (no range restriction).
double mtsfm_phase(const MtsfmParameters& params, double t);
/// (1 / 2 pi) d phi / dt, closed form. Throws InvalidInput for t outside [0, T).
std::vector<double> instantaneous_frequency(const MtsfmParameters& params,
                                            std::span<const double> t_grid);
/// 2 max_t |f(t)| on a dense uniform grid.
double swept_bandwidth(const MtsfmParameters& params);

/// Least-squares projection of an arbitrary phase function, sampled on a
/// uniform grid over one period, onto K harmonics.
MtsfmParameters fit_phase(std::span<const double> phase, std::size_t num_harmonics,
                          double duration_s);
/// Harmonic fit of the periodic LFM phase pi (B/T) (t - T/2)^2.
MtsfmParameters lfm_phase_fit(std::size_t num_harmonics, double bandwidth_hz,
                              double duration_s);
/// Harmonic fit of a stationary-phase nonlinear FM sweep whose spectral
/// density follows (1 - taper) + taper cos^2(pi f / B) on [-B/2, B/2].
MtsfmParameters tapered_fm_phase_fit(std::size_t num_harmonics, double bandwidth_hz,
                                     double duration_s, double taper);

/// Dispatches on spec.kind.
SampledSignal synthesize(const WaveformSpec& spec);

}  // namespace wavedesign
