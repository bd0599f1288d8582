#include "wavedesign/waveforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavedesign/error.hpp"

namespace wavedesign {

using detail::require;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t sample_count(double duration_s, double fs) {
  require(std::isfinite(duration_s) && duration_s > 0.0, "duration must be positive");
  require(std::isfinite(fs) && fs > 0.0, "sample rate must be positive");
  const double n = std::round(duration_s * fs);
  require(n >= 2.0, "duration x sample rate must give at least two samples");
  return static_cast<std::size_t>(n);
}

// Unit-energy amplitude for n samples at rate fs: sum |s|^2 dt = 1.
double unit_amplitude(std::size_t n, double fs) {
  return 1.0 / std::sqrt(static_cast<double>(n) / fs);
}

SampledSignal from_phase(const std::vector<double>& phase, double fs, double fc = 0.0) {
  const double a = unit_amplitude(phase.size(), fs);
  cvec s(phase.size());
  for (std::size_t n = 0; n < phase.size(); ++n) s[n] = std::polar(a, phase[n]);
  return SampledSignal(std::move(s), fs, fc, true);
}

void require_sampling(double fs, double bandwidth_hz, const char* what) {
  require(fs >= 4.0 * bandwidth_hz,
          std::string(what) + ": sample rate must be at least 4x the swept bandwidth");
}

}  // namespace

MtsfmParameters::MtsfmParameters(std::vector<double> a, std::vector<double> b, double t)
    : alpha(std::move(a)), beta(std::move(b)), duration_s(t) {
  validate();
}

MtsfmParameters MtsfmParameters::zeros(std::size_t k, double t) {
  return MtsfmParameters(std::vector<double>(k, 0.0), std::vector<double>(k, 0.0), t);
}

MtsfmParameters MtsfmParameters::from_flat(std::span<const double> x, double t) {
  require(x.size() >= 2 && x.size() % 2 == 0, "flat coefficient vector must have even length");
  const std::size_t k = x.size() / 2;
  return MtsfmParameters(std::vector<double>(x.begin(), x.begin() + static_cast<long>(k)),
                         std::vector<double>(x.begin() + static_cast<long>(k), x.end()), t);
}

std::vector<double> MtsfmParameters::flatten() const {
  std::vector<double> x(alpha);
  x.insert(x.end(), beta.begin(), beta.end());
  return x;
}

void MtsfmParameters::validate() const {
  require(!alpha.empty(), "MTSFM needs at least one harmonic");
  require(alpha.size() == beta.size(), "alpha and beta must have the same length");
  require(std::isfinite(duration_s) && duration_s > 0.0, "MTSFM duration must be positive");
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    require(std::isfinite(alpha[k]) && std::isfinite(beta[k]),
            "MTSFM coefficients must be finite");
  }
}

const char* to_string(WaveformKind kind) {
  switch (kind) {
    case WaveformKind::CW: return "cw";
    case WaveformKind::LFM: return "lfm";
    case WaveformKind::HFM: return "hfm";
    case WaveformKind::CostasFSK: return "costas";
    case WaveformKind::P4: return "p4";
    case WaveformKind::GeometricComb: return "comb";
    case WaveformKind::MTSFM: return "mtsfm";
  }
  return "unknown";
}

WaveformKind waveform_kind_from_string(const std::string& name) {
  for (auto k : {WaveformKind::CW, WaveformKind::LFM, WaveformKind::HFM, WaveformKind::CostasFSK,
                 WaveformKind::P4, WaveformKind::GeometricComb, WaveformKind::MTSFM}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidInput("unknown waveform kind '" + name + "'");
}

double WaveformSpec::effective_sample_rate() const {
  return sample_rate_hz > 0.0 ? sample_rate_hz : 8.0 * bandwidth_hz;
}

void WaveformSpec::validate() const {
  require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0.0, "bandwidth must be positive");
  require(std::isfinite(duration_s) && duration_s > 0.0, "duration must be positive");
  require(sample_rate_hz >= 0.0, "sample rate must be nonnegative (0 selects the default)");
  require(center_freq_hz >= 0.0, "center frequency must be nonnegative");
  if (kind == WaveformKind::CostasFSK) require(costas.has_value(), "costas waveform needs a code");
  if (kind == WaveformKind::MTSFM) {
    require(mtsfm.has_value(), "mtsfm waveform needs coefficients");
    mtsfm->validate();
  }
  if (kind == WaveformKind::GeometricComb) {
    require(comb_tones >= 2, "comb needs at least two tones");
    require(comb_ratio > 1.0, "comb ratio must exceed 1");
  }
}

SampledSignal synth_cw(double duration_s, double fs) {
  const std::size_t n = sample_count(duration_s, fs);
  return SampledSignal(cvec(n, unit_amplitude(n, fs)), fs, 0.0, true);
}

SampledSignal synth_lfm(double bandwidth_hz, double duration_s, double fs) {
  require(bandwidth_hz > 0.0, "LFM bandwidth must be positive");
  const std::size_t n = sample_count(duration_s, fs);
  require_sampling(fs, bandwidth_hz, "LFM");
  const double t_eff = static_cast<double>(n) / fs;
  const double rate = bandwidth_hz / t_eff;
  std::vector<double> phase(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / fs - 0.5 * t_eff;
    phase[i] = std::numbers::pi * rate * u * u;
  }
  return from_phase(phase, fs);
}

SampledSignal synth_hfm(double f1_hz, double f2_hz, double duration_s, double fs) {
  require(f1_hz > 0.0 && f2_hz > 0.0, "HFM band edges must be positive");
  require(f1_hz != f2_hz, "HFM band edges must differ");
  const std::size_t n = sample_count(duration_s, fs);
  require_sampling(fs, std::abs(f2_hz - f1_hz), "HFM");
  const double t_eff = static_cast<double>(n) / fs;
  const double beta = (f2_hz - f1_hz) / (f2_hz * t_eff);
  require(1.0 - beta * t_eff > 0.0, "HFM sweep is singular within the pulse");
  const double fc = 0.5 * (f1_hz + f2_hz);
  std::vector<double> phase(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    // 2 pi \int_0^t f1 / (1 - beta u) du, mixed down by fc
    phase[i] = -kTwoPi * f1_hz / beta * std::log1p(-beta * t) - kTwoPi * fc * t;
  }
  return from_phase(phase, fs, fc);
}

SampledSignal synth_costas_fsk(const CostasCode& code, double bandwidth_hz, double duration_s,
                               double fs) {
  const std::size_t n = sample_count(duration_s, fs);
  const auto chips = static_cast<std::size_t>(code.order());
  require(n >= chips, "fewer samples than chips");
  const double t_eff = static_cast<double>(n) / fs;
  const double df = static_cast<double>(chips) / t_eff;
  require_sampling(fs, std::max(bandwidth_hz, df * static_cast<double>(chips)), "Costas FSK");
  const double center = 0.5 * (static_cast<double>(chips) + 1.0);
  const auto& seq = code.sequence();
  std::vector<double> phase(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    phase[i] = acc;
    const std::size_t chip = i * chips / n;
    const double f = (static_cast<double>(seq[chip]) - center) * df;
    acc += kTwoPi * f / fs;
  }
  return from_phase(phase, fs);
}

double p4_phase(std::size_t n, std::size_t num_chips) {
  const double m = static_cast<double>(n - 1);
  return std::numbers::pi * m * m / static_cast<double>(num_chips) - std::numbers::pi * m;
}

SampledSignal synth_p4(std::size_t num_chips, double bandwidth_hz, double duration_s, double fs) {
  require(num_chips >= 2, "P4 needs at least two chips");
  const std::size_t n = sample_count(duration_s, fs);
  require(n >= num_chips, "fewer samples than chips");
  if (bandwidth_hz > 0.0) require_sampling(fs, bandwidth_hz, "P4");
  std::vector<double> phase(n);
  for (std::size_t i = 0; i < n; ++i) phase[i] = p4_phase(i * num_chips / n + 1, num_chips);
  return from_phase(phase, fs);
}

std::vector<double> geometric_comb_tones(std::size_t num_tones, double ratio,
                                         double bandwidth_hz) {
  require(num_tones >= 2, "comb needs at least two tones");
  require(ratio > 1.0, "comb ratio must exceed 1");
  require(bandwidth_hz > 0.0, "comb span must be positive");
  const double f0 = bandwidth_hz / (std::pow(ratio, static_cast<double>(num_tones - 1)) - 1.0);
  std::vector<double> tones(num_tones);
  double f = f0;
  for (auto& t : tones) {
    t = f;
    f *= ratio;
  }
  return tones;
}

SampledSignal synth_geometric_comb(std::size_t num_tones, double ratio, double bandwidth_hz,
                                   double duration_s, double fs) {
  const auto tones = geometric_comb_tones(num_tones, ratio, bandwidth_hz);
  const std::size_t n = sample_count(duration_s, fs);
  require(tones.back() < 0.5 * fs, "comb tone exceeds the Nyquist frequency");
  cvec s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    for (double f : tones) s[i] += std::polar(1.0, kTwoPi * f * t);
  }
  double e = 0.0;
  for (const auto& v : s) e += std::norm(v);
  const double scale = 1.0 / std::sqrt(e / fs);
  for (auto& v : s) v *= scale;
  return SampledSignal(std::move(s), fs, 0.0, false);
}

double mtsfm_phase(const MtsfmParameters& p, double t) {
  double phi = 0.0;
  const double w = kTwoPi * t / p.duration_s;
  for (std::size_t k = 0; k < p.num_harmonics(); ++k) {
    const double arg = w * static_cast<double>(k + 1);
    phi += p.alpha[k] * std::cos(arg) + p.beta[k] * std::sin(arg);
  }
  return phi;
}

namespace {
double mtsfm_freq(const MtsfmParameters& p, double t) {
  double f = 0.0;
  const double w = kTwoPi * t / p.duration_s;
  for (std::size_t k = 0; k < p.num_harmonics(); ++k) {
    const double kk = static_cast<double>(k + 1);
    const double arg = w * kk;
    f += kk / p.duration_s * (-p.alpha[k] * std::sin(arg) + p.beta[k] * std::cos(arg));
  }
  return f;
}
}  // namespace

SampledSignal synth_mtsfm(const MtsfmParameters& params, double fs) {
  params.validate();
  const std::size_t n = sample_count(params.duration_s, fs);
  require(fs >= 2.0 * swept_bandwidth(params),
          "MTSFM: sample rate must be at least 2x the swept bandwidth");
  std::vector<double> phase(n);
  for (std::size_t i = 0; i < n; ++i) phase[i] = mtsfm_phase(params, static_cast<double>(i) / fs);
  return from_phase(phase, fs);
}

std::vector<double> instantaneous_frequency(const MtsfmParameters& params,
                                            std::span<const double> t_grid) {
  params.validate();
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    require(t >= 0.0 && t < params.duration_s, "time outside [0, T)");
    out.push_back(mtsfm_freq(params, t));
  }
  return out;
}

double swept_bandwidth(const MtsfmParameters& params) {
  params.validate();
  const std::size_t m = std::max<std::size_t>(8192, 64 * params.num_harmonics());
  double peak = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = params.duration_s * static_cast<double>(i) / static_cast<double>(m);
    peak = std::max(peak, std::abs(mtsfm_freq(params, t)));
  }
  return 2.0 * peak;
}

MtsfmParameters fit_phase(std::span<const double> phase, std::size_t num_harmonics,
                          double duration_s) {
  const std::size_t m = phase.size();
  require(num_harmonics >= 1, "need at least one harmonic");
  require(m > 2 * num_harmonics, "phase grid too coarse for the requested harmonics");
  // uniform full-period grid: the harmonics are orthogonal, so least squares
  // reduces to projection
  std::vector<double> a(num_harmonics), b(num_harmonics);
  const double scale = 2.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < num_harmonics; ++k) {
    const double w = kTwoPi * static_cast<double>(k + 1) / static_cast<double>(m);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sa += phase[i] * std::cos(w * static_cast<double>(i));
      sb += phase[i] * std::sin(w * static_cast<double>(i));
    }
    a[k] = scale * sa;
    b[k] = scale * sb;
  }
  return MtsfmParameters(std::move(a), std::move(b), duration_s);
}

MtsfmParameters lfm_phase_fit(std::size_t num_harmonics, double bandwidth_hz, double duration_s) {
  require(num_harmonics >= 1, "need at least one harmonic");
  // pi B/T (t - T/2)^2 = const + sum_k (B T / (pi k^2)) cos(2 pi k t / T)
  std::vector<double> a(num_harmonics), b(num_harmonics, 0.0);
  const double tbp = bandwidth_hz * duration_s;
  for (std::size_t k = 0; k < num_harmonics; ++k) {
    const double kk = static_cast<double>(k + 1);
    a[k] = tbp / (std::numbers::pi * kk * kk);
  }
  return MtsfmParameters(std::move(a), std::move(b), duration_s);
}

MtsfmParameters tapered_fm_phase_fit(std::size_t num_harmonics, double bandwidth_hz,
                                     double duration_s, double taper) {
  require(taper >= 0.0 && taper <= 1.0, "taper must lie in [0, 1]");
  require(bandwidth_hz > 0.0, "bandwidth must be positive");
  constexpr std::size_t kGrid = 8192;
  constexpr std::size_t kFreqGrid = 4001;

  // stationary phase: time spent near f is proportional to the spectral density there
  std::vector<double> f(kFreqGrid), cum(kFreqGrid);
  double acc = 0.0;
  for (std::size_t i = 0; i < kFreqGrid; ++i) {
    f[i] = bandwidth_hz * (static_cast<double>(i) / static_cast<double>(kFreqGrid - 1) - 0.5);
    const double c = std::cos(std::numbers::pi * f[i] / bandwidth_hz);
    acc += (1.0 - taper) + taper * c * c;
    cum[i] = acc;
  }
  for (auto& c : cum) c = (c - cum.front()) / (cum.back() - cum.front());

  std::vector<double> phase(kGrid);
  double phi = 0.0;
  const double dt = duration_s / static_cast<double>(kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(kGrid);
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const auto j = static_cast<std::size_t>(std::clamp<long>(it - cum.begin(), 1, kFreqGrid - 1));
    const double w = (u - cum[j - 1]) / std::max(cum[j] - cum[j - 1], 1e-300);
    const double freq = f[j - 1] + w * (f[j] - f[j - 1]);
    phase[i] = phi + std::numbers::pi * freq * dt;
    phi += kTwoPi * freq * dt;
  }
  return fit_phase(phase, num_harmonics, duration_s);
}

SampledSignal synthesize(const WaveformSpec& spec) {
  spec.validate();
  const double fs = spec.effective_sample_rate();
  const double b = spec.bandwidth_hz;
  const double t = spec.duration_s;
  switch (spec.kind) {
    case WaveformKind::CW:
      return synth_cw(t, fs).with_center_freq(spec.center_freq_hz);
    case WaveformKind::LFM:
      return synth_lfm(b, t, fs).with_center_freq(spec.center_freq_hz);
    case WaveformKind::HFM: {
      double f1 = spec.hfm_f1_hz, f2 = spec.hfm_f2_hz;
      if (f1 <= 0.0 || f2 <= 0.0) {
        const double fc = spec.center_freq_hz > 0.0 ? spec.center_freq_hz : 1.5 * b;
        f1 = fc - 0.5 * b;
        f2 = fc + 0.5 * b;
      }
      return synth_hfm(f1, f2, t, fs);
    }
    case WaveformKind::CostasFSK:
      return synth_costas_fsk(*spec.costas, b, t, fs).with_center_freq(spec.center_freq_hz);
    case WaveformKind::P4: {
      const std::size_t chips =
          spec.chips > 0 ? spec.chips : static_cast<std::size_t>(std::lround(b * t));
      return synth_p4(chips, b, t, fs).with_center_freq(spec.center_freq_hz);
    }
    case WaveformKind::GeometricComb:
      return synth_geometric_comb(spec.comb_tones, spec.comb_ratio, b, t, fs)
          .with_center_freq(spec.center_freq_hz);
    case WaveformKind::MTSFM: {
      MtsfmParameters p = *spec.mtsfm;
      return synth_mtsfm(p, fs).with_center_freq(spec.center_freq_hz);
    }
  }
  throw InvalidInput("unhandled waveform kind");
}

}  // namespace wavedesign
