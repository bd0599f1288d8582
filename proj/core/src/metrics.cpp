#include <algorithm>
#include <cmath>

#include "wavedesign/error.hpp"
#include "wavedesign/metrics.hpp"

namespace wavedesign {

using detail::require;

void RegionSpec::validate() const {
  require(std::isfinite(inner_delay_s) && inner_delay_s >= 0.0,
          "region inner delay must be nonnegative");
  require(std::isfinite(outer_delay_s) && outer_delay_s > inner_delay_s,
          "region outer delay must exceed the inner delay");
}

RegionSpec default_region(double bandwidth_hz, double duration_s) {
  require(bandwidth_hz > 0.0 && duration_s > 0.0, "bandwidth and duration must be positive");
  RegionSpec r{2.0 / bandwidth_hz, 0.25 * duration_s};
  r.validate();
  return r;
}

std::vector<std::size_t> region_indices(const CorrelationResponse& resp, const RegionSpec& region) {
  region.validate();
  const double eps = 1e-9 * resp.lag_step_s;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < resp.lags_s.size(); ++i) {
    const double a = std::abs(resp.lags_s[i]);
    if (a >= region.inner_delay_s - eps && a <= region.outer_delay_s + eps) idx.push_back(i);
  }
  require(!idx.empty(), "sidelobe region contains no lags");
  return idx;
}

double psl_region(const CorrelationResponse& resp, const RegionSpec& region) {
  double peak = kDbFloor;
  for (std::size_t i : region_indices(resp, region)) peak = std::max(peak, resp.magnitude_db[i]);
  return peak;
}

double isl_region(const CorrelationResponse& resp, const RegionSpec& region) {
  const double r0 = std::norm(resp.values.at(resp.zero_index));
  require(r0 > 0.0, "correlation is zero at lag 0");
  double acc = 0.0;
  for (std::size_t i : region_indices(resp, region)) acc += std::norm(resp.values[i]);
  return power_db(acc * resp.lag_step_s / r0);
}

double inband_energy_fraction(const Spectrum& spec, double bandwidth_hz) {
  require(bandwidth_hz > 0.0, "band must be positive");
  const double fs = spec.bin_width_hz * static_cast<double>(spec.magnitude.size());
  require(bandwidth_hz <= fs * (1.0 + 1e-12), "band exceeds the sample rate");
  const double half = 0.5 * bandwidth_hz * (1.0 + 1e-12);
  double in = 0.0, all = 0.0;
  for (std::size_t i = 0; i < spec.magnitude.size(); ++i) {
    const double p = spec.magnitude[i] * spec.magnitude[i];
    all += p;
    if (std::abs(spec.freqs_hz[i]) <= half) in += p;
  }
  require(all > 0.0, "spectrum has zero energy");
  return in / all;
}

double rms_bandwidth(const Spectrum& spec) {
  double p_sum = 0.0, f_sum = 0.0;
  for (std::size_t i = 0; i < spec.magnitude.size(); ++i) {
    const double p = spec.magnitude[i] * spec.magnitude[i];
    p_sum += p;
    f_sum += p * spec.freqs_hz[i];
  }
  require(p_sum > 0.0, "rms bandwidth of a zero-energy spectrum");
  const double centroid = f_sum / p_sum;
  double var = 0.0;
  for (std::size_t i = 0; i < spec.magnitude.size(); ++i) {
    const double d = spec.freqs_hz[i] - centroid;
    var += spec.magnitude[i] * spec.magnitude[i] * d * d;
  }
  return std::sqrt(var / p_sum);
}

double p99_bandwidth(const Spectrum& spec) { return energy_interval(spec, 0.99).width(); }

MetricsReport compute_metrics(const SampledSignal& signal, const RegionSpec& region,
                              double bandwidth_hz, std::size_t zero_pad_factor) {
  const CorrelationResponse acf = autocorrelation(signal);
  const Spectrum spec = spectrum(signal, zero_pad_factor);
  MetricsReport m;
  m.psl_db = psl_region(acf, region);
  m.isl_db = isl_region(acf, region);
  m.inband_energy_fraction = inband_energy_fraction(spec, bandwidth_hz);
  m.rms_bandwidth_hz = rms_bandwidth(spec);
  m.p99_bandwidth_hz = p99_bandwidth(spec);
  m.bandwidth_hz = bandwidth_hz;
  m.tbp = bandwidth_hz * signal.duration_s();
  return m;
}

}  // namespace wavedesign
