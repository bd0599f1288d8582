#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wavedesign/signal.hpp"

namespace wavedesign {

struct Echo {
  double delay_s = 0.0;
  double doppler_hz = 0.0;
  /// Relative to the strongest echo (0 dB).
  double level_db = 0.0;
  /// Time-scale factor applied by band-limited resampling; 1 keeps the
  /// narrowband (pure frequency shift) model.
  double time_scale = 1.0;
};

struct EchoScene {
  std::vector<Echo> echoes;
  /// Per-sample complex noise power relative to the waveform's mean sample
  /// power; empty disables noise.
  std::optional<double> noise_level_db;
  /// Received window length; zero selects max delay + T.
  double window_s = 0.0;

  void validate() const;
};

/// sum_i 10^(L_i/20) s(eta_i (t - tau_i)) exp(j 2 pi nu_i t) + noise.
SampledSignal simulate_returns(const SampledSignal& waveform, const EchoScene& scene,
                               std::uint64_t seed = 0);

struct RangeDopplerMap {
  std::vector<double> delays_s;
  std::vector<double> dopplers_hz;
  /// [doppler][delay], |response| in dB relative to the global peak.
  std::vector<std::vector<double>> magnitude_db;
  /// [doppler][delay], sum_n r[n] conj(s_nu[n - m]) dt / E_s.
  std::vector<cvec> response;
  std::size_t zero_index = 0;
};

/// One correlator per Doppler, template s(t) exp(j 2 pi nu t). Delays run
/// from -(N - 1) to (Nr - 1) samples.
RangeDopplerMap mf_bank(const SampledSignal& received, const SampledSignal& waveform,
                        const std::vector<double>& dopplers_hz);

struct EchoDetection {
  bool detected = false;
  double measured_level_db = 0.0;
  double measured_delay_s = 0.0;
  double position_error_s = 0.0;
  /// Median level of the surrounding neighborhood with echo mainlobes removed.
  double background_db = 0.0;
};

struct ResolvabilityOptions {
  double margin_db = 6.0;
  /// Peak search half-width, in units of 1/B.
  double search_cells = 1.0;
  /// Background neighborhood half-width, in units of 1/B.
  double neighborhood_cells = 10.0;
  /// Mainlobe half-width excluded around every echo, in units of 1/B.
  double mainlobe_cells = 2.0;
};

/// Per echo: the strongest local maximum within the search window of the
/// true delay on the Doppler row nearest the echo, compared with the median
/// of the background neighborhood.
std::vector<EchoDetection> resolvability_report(const RangeDopplerMap& map, const EchoScene& scene,
                                                double bandwidth_hz,
                                                const ResolvabilityOptions& options = {});

/// Six zero-Doppler echoes 8/B apart at {0, -10, -18, -25, -33, -40} dB.
EchoScene graded_echo_scene(double bandwidth_hz);

}  // namespace wavedesign
