#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "wavedesign/signal.hpp"

namespace wavedesign {

/// Correlation over integer sample lags, tau_m = m dt.
///
/// `values` holds the complex correlation divided by sqrt(E_a E_b); for an
/// autocorrelation that makes values at lag 0 equal to one.
struct CorrelationResponse {
  std::vector<double> lags_s;
  cvec values;
  std::vector<double> magnitude_db;
  double lag_step_s = 0.0;
  /// Index into lags_s holding tau = 0.
  std::size_t zero_index = 0;
};

/// R(tau) = \int a(t) b*(t + tau) dt / sqrt(E_a E_b) for all lags where the
/// supports overlap.
CorrelationResponse cross_correlation(const SampledSignal& a, const SampledSignal& b);
/// cross_correlation(s, s).
CorrelationResponse autocorrelation(const SampledSignal& s);

/// Narrowband ambiguity surface. magnitude[doppler][delay], normalized so the
/// value at (0, 0) is one.
struct AmbiguitySurface {
  std::vector<double> delays_s;
  std::vector<double> dopplers_hz;
  std::vector<std::vector<double>> magnitude;
};

/// chi(tau, nu) = \int s(t) s*(t + tau) exp(j 2 pi nu t) dt on a symmetric
/// grid: delays are integer lags spread over [-max_delay, max_delay],
/// Dopplers linearly over [-max_doppler, max_doppler].
AmbiguitySurface ambiguity_function(const SampledSignal& signal, double max_delay_s,
                                    double max_doppler_hz, std::size_t delay_points,
                                    std::size_t doppler_points);

/// One complex Doppler row of the ambiguity function over every lag, divided by
/// the signal energy.
CorrelationResponse doppler_cut(const SampledSignal& signal, double doppler_hz);

/// Sidelobe region {tau : inner <= |tau| <= outer}.
struct RegionSpec {
  double inner_delay_s = 0.0;
  double outer_delay_s = 0.0;
  void validate() const;
};

/// Inner radius 2/B (two resolution cells), outer T/4.
RegionSpec default_region(double bandwidth_hz, double duration_s);

/// Lag indices of `resp` that fall in `region`. Throws if empty.
std::vector<std::size_t> region_indices(const CorrelationResponse& resp, const RegionSpec& region);

/// max magnitude_db over the region.
double psl_region(const CorrelationResponse& resp, const RegionSpec& region);
/// 10 log10( sum_region |R|^2 dtau / |R(0)|^2 ), floored.
double isl_region(const CorrelationResponse& resp, const RegionSpec& region);

/// Spectral energy in [-B/2, B/2] over total energy.
double inband_energy_fraction(const Spectrum& spec, double bandwidth_hz);
/// Centroid-removed RMS bandwidth.
double rms_bandwidth(const Spectrum& spec);
/// Width of the central 99%-energy interval.
double p99_bandwidth(const Spectrum& spec);

struct MetricsReport {
  double psl_db = 0.0;
  double isl_db = 0.0;
  double inband_energy_fraction = 0.0;
  double rms_bandwidth_hz = 0.0;
  double tbp = 0.0;
  double p99_bandwidth_hz = 0.0;
  /// The band used for inband_energy_fraction and tbp.
  double bandwidth_hz = 0.0;
};

/// Region metrics of the autocorrelation plus spectral occupancy in `bandwidth_hz`.
MetricsReport compute_metrics(const SampledSignal& signal, const RegionSpec& region,
                              double bandwidth_hz, std::size_t zero_pad_factor = 4);

enum class DopplerModel {
  /// echo = s(t) exp(j 2 pi nu t)
  Narrowband,
  /// echo = time_scale(s, 1 + nu / fc); needs a carrier annotation.
  Wideband,
};

struct DopplerTolerancePoint {
  double doppler_hz;
  double peak_loss_db;
  double peak_shift_s;
};

/// Peak zero-Doppler MF output (and its lag) for each Doppler-shifted echo.
std::vector<DopplerTolerancePoint> doppler_tolerance_curve(
    const SampledSignal& signal, std::span<const double> dopplers_hz,
    DopplerModel model = DopplerModel::Narrowband);

/// Sub-sample peak location: parabolic fit through |values| at index and neighbours.
double parabolic_peak_offset(double left, double center, double right);

}  // namespace wavedesign
