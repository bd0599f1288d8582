#include "wavedesign/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "wavedesign/error.hpp"
#include "wavedesign/fft.hpp"
#include "wavedesign/metrics.hpp"

namespace wavedesign {

using detail::require;

void EchoScene::validate() const {
  require(!echoes.empty(), "scene needs at least one echo");
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& e : echoes) {
    require(std::isfinite(e.delay_s) && e.delay_s >= 0.0, "echo delay must be nonnegative");
    require(std::isfinite(e.doppler_hz), "echo Doppler must be finite");
    require(std::isfinite(e.level_db), "echo level must be finite");
    require(std::isfinite(e.time_scale) && e.time_scale > 0.0, "echo time scale must be positive");
    top = std::max(top, e.level_db);
  }
  require(std::abs(top) < 1e-12, "strongest echo must sit at 0 dB");
  require(!noise_level_db || std::isfinite(*noise_level_db), "noise level must be finite");
  require(std::isfinite(window_s) && window_s >= 0.0, "window must be nonnegative");
}

SampledSignal simulate_returns(const SampledSignal& waveform, const EchoScene& scene,
                               std::uint64_t seed) {
  scene.validate();
  const double fs = waveform.sample_rate_hz();
  const double T = waveform.duration_s();
  double latest = 0.0;
  for (const auto& e : scene.echoes) latest = std::max(latest, e.delay_s + T / e.time_scale);
  const double window = scene.window_s > 0.0 ? scene.window_s : latest;
  for (const auto& e : scene.echoes)
    require(e.delay_s + T / e.time_scale <= window * (1.0 + 1e-12),
            "echo extends beyond the receive window");
  const auto len = static_cast<std::size_t>(std::ceil(window * fs - 1e-9));

  cvec rx(std::max<std::size_t>(len, 2));
  for (const auto& e : scene.echoes) {
    const auto copy = delay_and_scale(waveform, e.delay_s, e.time_scale, rx.size());
    const double amp = std::pow(10.0, e.level_db / 20.0);
    for (std::size_t n = 0; n < rx.size(); ++n) {
      const double t = static_cast<double>(n) / fs;
      const auto mod = e.doppler_hz == 0.0
                           ? std::complex<double>(1.0)
                           : std::polar(1.0, 2.0 * std::numbers::pi * e.doppler_hz * t);
      rx[n] += amp * copy[n] * mod;
    }
  }
  if (scene.noise_level_db) {
    const double mean_power = waveform.energy() / T;
    const double sigma = std::sqrt(mean_power * std::pow(10.0, *scene.noise_level_db / 10.0) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    for (auto& v : rx) {
      const double re = g(rng);
      const double im = g(rng);
      v += std::complex<double>(re, im);
    }
  }
  return SampledSignal(std::move(rx), fs, waveform.center_freq_hz(), false);
}

RangeDopplerMap mf_bank(const SampledSignal& received, const SampledSignal& waveform,
                        const std::vector<double>& dopplers_hz) {
  require(!dopplers_hz.empty(), "Doppler grid must be nonempty");
  require(received.sample_rate_hz() == waveform.sample_rate_hz(),
          "received and waveform sample rates differ");
  for (double nu : dopplers_hz) require(std::isfinite(nu), "Doppler grid values must be finite");
  const double fs = waveform.sample_rate_hz();
  const double dt = 1.0 / fs;
  const std::size_t n = waveform.size();
  const std::size_t nr = received.size();
  const std::size_t lags = n + nr - 1;
  const std::size_t L = fft::next_pow2(lags);
  const double inv_energy = 1.0 / waveform.energy();

  RangeDopplerMap map;
  map.dopplers_hz = dopplers_hz;
  map.zero_index = n - 1;
  map.delays_s.resize(lags);
  for (std::size_t i = 0; i < lags; ++i)
    map.delays_s[i] = (static_cast<double>(i) - static_cast<double>(n - 1)) * dt;

  const auto R = fft::forward(received.samples(), L);
  cvec tmpl(n);
  double peak = 0.0;
  for (double nu : dopplers_hz) {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * dt;
      tmpl[k] = nu == 0.0 ? waveform.samples()[k]
                          : waveform.samples()[k] *
                                std::polar(1.0, 2.0 * std::numbers::pi * nu * t);
    }
    auto S = fft::forward(tmpl, L);
    for (std::size_t k = 0; k < L; ++k) S[k] = R[k] * std::conj(S[k]);
    const auto y = fft::inverse(S);
    cvec row(lags);
    for (std::size_t i = 0; i < lags; ++i) {
      const long m = static_cast<long>(i) - static_cast<long>(n - 1);
      const std::size_t idx = m >= 0 ? static_cast<std::size_t>(m) : L - static_cast<std::size_t>(-m);
      row[i] = y[idx] * dt * inv_energy;
      peak = std::max(peak, std::abs(row[i]));
    }
    map.response.push_back(std::move(row));
  }
  for (const auto& row : map.response) {
    std::vector<double> db(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) db[i] = amplitude_db(std::abs(row[i]), peak);
    map.magnitude_db.push_back(std::move(db));
  }
  return map;
}

std::vector<EchoDetection> resolvability_report(const RangeDopplerMap& map, const EchoScene& scene,
                                                double bandwidth_hz,
                                                const ResolvabilityOptions& opt) {
  scene.validate();
  require(bandwidth_hz > 0.0, "bandwidth must be positive");
  require(opt.margin_db > 0.0, "margin must be positive");
  require(opt.search_cells > 0.0 && opt.neighborhood_cells > opt.mainlobe_cells &&
              opt.mainlobe_cells >= 0.0,
          "invalid resolvability neighborhood");
  require(map.delays_s.size() >= 3 && !map.magnitude_db.empty(), "map is too small");
  const double dtau = map.delays_s[1] - map.delays_s[0];
  const double cell = 1.0 / bandwidth_hz;
  const double eps = 1e-9 * dtau;

  std::vector<EchoDetection> out;
  for (const auto& e : scene.echoes) {
    std::size_t row_i = 0;
    for (std::size_t r = 1; r < map.dopplers_hz.size(); ++r)
      if (std::abs(map.dopplers_hz[r] - e.doppler_hz) < std::abs(map.dopplers_hz[row_i] - e.doppler_hz))
        row_i = r;
    const auto& db = map.magnitude_db[row_i];
    const auto& resp = map.response[row_i];
    const std::size_t m = db.size();

    EchoDetection d;
    std::optional<std::size_t> best;
    std::size_t best_any = 0;
    double best_any_db = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(map.delays_s[i] - e.delay_s) > opt.search_cells * cell + eps) continue;
      if (db[i] > best_any_db) {
        best_any_db = db[i];
        best_any = i;
      }
      const bool local = i > 0 && i + 1 < m && std::abs(resp[i]) >= std::abs(resp[i - 1]) &&
                         std::abs(resp[i]) >= std::abs(resp[i + 1]);
      if (local && (!best || db[i] > db[*best])) best = i;
    }
    const std::size_t pk = best.value_or(best_any);
    double offset = 0.0;
    if (best) {
      const double y0 = std::abs(resp[pk - 1]), y1 = std::abs(resp[pk]), y2 = std::abs(resp[pk + 1]);
      offset = parabolic_peak_offset(y0, y1, y2);
    }
    d.measured_level_db = db[pk];
    d.measured_delay_s = map.delays_s[pk] + offset * dtau;
    d.position_error_s = std::abs(d.measured_delay_s - e.delay_s);

    std::vector<double> background;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(map.delays_s[i] - e.delay_s) > opt.neighborhood_cells * cell + eps) continue;
      bool in_mainlobe = false;
      for (const auto& other : scene.echoes)
        if (std::abs(map.delays_s[i] - other.delay_s) <= opt.mainlobe_cells * cell + eps)
          in_mainlobe = true;
      if (!in_mainlobe) background.push_back(db[i]);
    }
    if (background.empty()) {
      d.background_db = kDbFloor;
    } else {
      const auto mid = background.begin() + static_cast<long>(background.size() / 2);
      std::nth_element(background.begin(), mid, background.end());
      double med = *mid;
      if (background.size() % 2 == 0) med = 0.5 * (med + *std::max_element(background.begin(), mid));
      d.background_db = med;
    }
    d.detected = best.has_value() && d.measured_level_db - d.background_db >= opt.margin_db;
    out.push_back(d);
  }
  return out;
}

EchoScene graded_echo_scene(double bandwidth_hz) {
  require(bandwidth_hz > 0.0, "bandwidth must be positive");
  constexpr double levels[] = {0.0, -10.0, -18.0, -25.0, -33.0, -40.0};
  EchoScene s;
  for (std::size_t i = 0; i < std::size(levels); ++i)
    s.echoes.push_back({8.0 * static_cast<double>(i) / bandwidth_hz, 0.0, levels[i], 1.0});
  return s;
}

}  // namespace wavedesign
