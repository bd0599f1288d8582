#include <algorithm>
#include <cmath>

#include "wavedesign/error.hpp"
#include "wavedesign/metrics.hpp"

namespace wavedesign {

using detail::require;

AmbiguitySurface ambiguity_function(const SampledSignal& signal, double max_delay_s,
                                    double max_doppler_hz, std::size_t delay_points,
                                    std::size_t doppler_points) {
  require(delay_points >= 2 && doppler_points >= 2, "ambiguity grid sizes must be >= 2");
  require(max_delay_s >= 0.0 && max_delay_s <= signal.duration_s(),
          "max delay must lie in [0, T]");
  require(max_doppler_hz >= 0.0 && std::isfinite(max_doppler_hz), "max Doppler must be >= 0");
  const double fs = signal.sample_rate_hz();
  const long n = static_cast<long>(signal.size());
  const long max_lag = std::min<long>(n - 1, static_cast<long>(std::floor(max_delay_s * fs + 1e-9)));

  std::vector<long> lags;
  const long full = 2 * max_lag + 1;
  if (static_cast<long>(delay_points) >= full) {
    for (long m = -max_lag; m <= max_lag; ++m) lags.push_back(m);
  } else {
    const long p = static_cast<long>(delay_points);
    for (long i = 0; i < p; ++i) {
      const double x = static_cast<double>(max_lag * (2 * i - (p - 1))) / static_cast<double>(p - 1);
      lags.push_back(std::lround(x));
    }
  }

  AmbiguitySurface out;
  for (long m : lags) out.delays_s.push_back(static_cast<double>(m) / fs);
  const long q = static_cast<long>(doppler_points);
  for (long i = 0; i < q; ++i) {
    out.dopplers_hz.push_back(max_doppler_hz * static_cast<double>(2 * i - (q - 1)) /
                              static_cast<double>(q - 1));
  }

  const CorrelationResponse zero = doppler_cut(signal, 0.0);
  const double peak = std::abs(zero.values[zero.zero_index]);
  require(peak > 0.0, "ambiguity of a zero signal");

  out.magnitude.reserve(out.dopplers_hz.size());
  for (double nu : out.dopplers_hz) {
    const CorrelationResponse row = nu == 0.0 ? zero : doppler_cut(signal, nu);
    std::vector<double> mags;
    mags.reserve(lags.size());
    for (long m : lags) {
      const auto idx = static_cast<std::size_t>(static_cast<long>(row.zero_index) + m);
      mags.push_back(std::abs(row.values[idx]) / peak);
    }
    out.magnitude.push_back(std::move(mags));
  }
  return out;
}

std::vector<DopplerTolerancePoint> doppler_tolerance_curve(const SampledSignal& signal,
                                                           std::span<const double> dopplers_hz,
                                                           DopplerModel model) {
  const double fc = signal.center_freq_hz();
  if (model == DopplerModel::Wideband) {
    require(fc > 0.0, "wideband Doppler model needs a carrier frequency");
  }
  const double e = signal.energy();
  std::vector<DopplerTolerancePoint> out;
  out.reserve(dopplers_hz.size());
  for (double nu : dopplers_hz) {
    require(std::isfinite(nu), "Doppler values must be finite");
    if (model == DopplerModel::Wideband) {
      require(1.0 + nu / fc > 0.0, "Doppler implies a non-positive time-scale factor");
    }
    cvec vals;
    double step = 0.0, zero_lag = 0.0;
    if (model == DopplerModel::Narrowband) {
      CorrelationResponse row = doppler_cut(signal, nu);
      vals = std::move(row.values);
      step = row.lag_step_s;
      zero_lag = row.lags_s.front();
    } else {
      const SampledSignal echo = time_scale(signal, 1.0 + nu / fc);
      CorrelationResponse row = cross_correlation(echo, signal);
      const double rescale = std::sqrt(echo.energy() / e);
      for (auto& v : row.values) v *= rescale;
      vals = std::move(row.values);
      step = row.lag_step_s;
      zero_lag = row.lags_s.front();
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
      if (std::abs(vals[i]) > std::abs(vals[best])) best = i;
    }
    double off = 0.0;
    if (best > 0 && best + 1 < vals.size()) {
      off = parabolic_peak_offset(std::abs(vals[best - 1]), std::abs(vals[best]),
                                  std::abs(vals[best + 1]));
    }
    // R(tau) peaks at tau = -(echo delay); report the delay bias of the echo
    const double lag = zero_lag + (static_cast<double>(best) + off) * step;
    out.push_back({nu, amplitude_db(std::abs(vals[best])), lag == 0.0 ? 0.0 : -lag});
  }
  return out;
}

}  // namespace wavedesign
