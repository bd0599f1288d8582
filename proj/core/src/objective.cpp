#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavedesign/error.hpp"
#include "wavedesign/fft.hpp"
#include "wavedesign/optimizer.hpp"

namespace wavedesign {

using detail::require;

const char* to_string(ObjectiveKind kind) { return kind == ObjectiveKind::ISL ? "isl" : "psl"; }

ObjectiveKind objective_kind_from_string(const std::string& name) {
  if (name == "isl" || name == "ISL") return ObjectiveKind::ISL;
  if (name == "psl" || name == "PSL") return ObjectiveKind::PSL;
  throw InvalidInput("unknown objective '" + name + "'");
}

void OptimizationProblem::validate() const {
  initial.validate();
  region.validate();
  require(sample_rate_hz > 0.0, "optimization problem needs a sample rate");
  require(bandwidth_target_hz > 0.0, "bandwidth target must be positive");
  require(bandwidth_tolerance > 0.0 && bandwidth_tolerance < 0.5,
          "bandwidth tolerance must lie in (0, 0.5)");
  require(penalty_weight > 0.0, "penalty weight must be positive");
  require(budget >= 1, "budget must be at least one evaluation");
  require(spectrum_zero_pad >= 1, "spectrum zero pad must be >= 1");
  require(psl_sharpness > 0.0, "PSL sharpness must be positive");
  require(region.outer_delay_s <= initial.duration_s, "region extends beyond the pulse");
}

double objective_db(double value, ObjectiveKind kind) {
  return kind == ObjectiveKind::ISL ? power_db(value) : amplitude_db(value);
}

struct ObjectiveEvaluator::Forward {
  cvec s;         // samples
  cvec spec;      // unscaled DFT, length fft_len
  cvec corr;      // R_m (dt included) at circular index m mod L
  double r0 = 0.0;
  double power_sum = 0.0;
  double centroid = 0.0;
  double rms = 0.0;
  double sidelobe = 0.0;
  double penalty = 0.0;
  // d sidelobe / d |R_m|^2 for m >= 0 in the region (same for -m)
  std::vector<double> weights;
};

ObjectiveEvaluator::ObjectiveEvaluator(const OptimizationProblem& problem) : problem_(problem) {
  problem_.validate();
  harmonics_ = problem_.initial.num_harmonics();
  const double fs = problem_.sample_rate_hz;
  const double t = problem_.initial.duration_s;
  samples_ = static_cast<std::size_t>(std::round(fs * t));
  require(samples_ >= 2, "problem yields fewer than two samples");
  dt_ = 1.0 / fs;
  amplitude_ = 1.0 / std::sqrt(static_cast<double>(samples_) * dt_);
  fft_len_ = std::max(fft::next_pow2(2 * samples_ - 1),
                      fft::next_pow2(problem_.spectrum_zero_pad * samples_));

  cos_table_.resize(samples_ * harmonics_);
  sin_table_.resize(samples_ * harmonics_);
  for (std::size_t n = 0; n < samples_; ++n) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(n) * dt_ / t;
    for (std::size_t k = 0; k < harmonics_; ++k) {
      const double arg = w * static_cast<double>(k + 1);
      cos_table_[n * harmonics_ + k] = std::cos(arg);
      sin_table_[n * harmonics_ + k] = std::sin(arg);
    }
  }

  bin_freqs_.resize(fft_len_);
  const double df = fs / static_cast<double>(fft_len_);
  for (std::size_t k = 0; k < fft_len_; ++k) {
    const auto kk = static_cast<double>(k);
    bin_freqs_[k] = k < fft_len_ / 2 ? kk * df : (kk - static_cast<double>(fft_len_)) * df;
  }

  const double eps = 1e-9 * dt_;
  for (std::size_t m = 0; m < samples_; ++m) {
    const double tau = static_cast<double>(m) * dt_;
    if (tau >= problem_.region.inner_delay_s - eps && tau <= problem_.region.outer_delay_s + eps)
      region_lags_.push_back(static_cast<long>(m));
  }
  require(!region_lags_.empty(), "sidelobe region contains no lags");
}

double ObjectiveEvaluator::bandwidth_violation(double rms) const {
  const double target = problem_.bandwidth_target_hz;
  return std::abs(rms - target) / target - problem_.bandwidth_tolerance;
}

ObjectiveEvaluator::Forward ObjectiveEvaluator::forward(std::span<const double> x) const {
  require(x.size() == dimension(), "coefficient vector has the wrong dimension");
  Forward fw;
  fw.s.resize(samples_);
  for (std::size_t n = 0; n < samples_; ++n) {
    const double* c = &cos_table_[n * harmonics_];
    const double* s = &sin_table_[n * harmonics_];
    double phi = 0.0;
    for (std::size_t k = 0; k < harmonics_; ++k) phi += x[k] * c[k] + x[harmonics_ + k] * s[k];
    fw.s[n] = std::polar(amplitude_, phi);
  }

  fw.spec = fft::forward(fw.s, fft_len_);
  cvec power(fft_len_);
  double p_sum = 0.0, f_sum = 0.0;
  for (std::size_t k = 0; k < fft_len_; ++k) {
    const double p = std::norm(fw.spec[k]);
    power[k] = p;
    p_sum += p;
    f_sum += p * bin_freqs_[k];
  }
  fw.power_sum = p_sum;
  fw.centroid = f_sum / p_sum;
  double var = 0.0;
  for (std::size_t k = 0; k < fft_len_; ++k) {
    const double d = bin_freqs_[k] - fw.centroid;
    var += power[k].real() * d * d;
  }
  fw.rms = std::sqrt(var / p_sum);

  // inverse of |S|^2 gives sum_n s[n+m] conj(s[n]) = conj(R_m) / dt
  cvec r = fft::inverse(power);
  fw.corr.resize(fft_len_);
  for (std::size_t i = 0; i < fft_len_; ++i) fw.corr[i] = std::conj(r[i]) * dt_;
  fw.r0 = std::abs(fw.corr[0]);

  const double r0_sq = fw.r0 * fw.r0;
  fw.weights.assign(region_lags_.size(), 0.0);
  if (problem_.objective == ObjectiveKind::ISL) {
    double acc = 0.0;
    for (std::size_t i = 0; i < region_lags_.size(); ++i) {
      const long m = region_lags_[i];
      const double both = std::norm(fw.corr[static_cast<std::size_t>(m)]) +
                          std::norm(fw.corr[fft_len_ - static_cast<std::size_t>(m)]);
      acc += m == 0 ? 0.5 * both : both;
      fw.weights[i] = dt_ / r0_sq;
    }
    fw.sidelobe = acc * dt_ / r0_sq;
  } else {
    // smoothed max over region magnitudes m_i = |R_i| / |R0|; the sharpness
    // applies to magnitudes relative to the current region maximum
    const double beta = problem_.psl_sharpness;
    std::vector<double> mag(region_lags_.size());
    double peak = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < region_lags_.size(); ++i) {
      const auto m = static_cast<std::size_t>(region_lags_[i]);
      const double a = std::abs(fw.corr[m]);
      const double b = std::abs(fw.corr[(fft_len_ - m) % fft_len_]);
      mag[i] = 0.5 * (a + b) / fw.r0;
      if (mag[i] > peak) {
        peak = mag[i];
        arg = i;
      }
    }
    if (peak > 0.0) {
      // each lag pair counts twice in the sum (both signs of tau)
      double z = 0.0, wm = 0.0;
      std::vector<double> e(mag.size());
      for (std::size_t i = 0; i < mag.size(); ++i) {
        const double mult = region_lags_[i] == 0 ? 1.0 : 2.0;
        e[i] = mult * std::exp(beta * (mag[i] / peak - 1.0));
        z += e[i];
      }
      const double value = peak + peak / beta * std::log(z);
      for (std::size_t i = 0; i < mag.size(); ++i) {
        e[i] /= z;
        wm += e[i] * mag[i];
      }
      const double d_peak = value / peak - wm / peak;
      for (std::size_t i = 0; i < mag.size(); ++i) {
        // d value / d m_i, then per-sign d m_i / d |R|^2 with m_i averaged over signs
        double dm = e[i] + (i == arg ? d_peak : 0.0);
        const double mult = region_lags_[i] == 0 ? 1.0 : 2.0;
        dm /= mult;
        const double r = mag[i] * fw.r0;
        fw.weights[i] = r > 0.0 ? dm / (2.0 * r * fw.r0) : 0.0;
      }
      fw.sidelobe = value;
    }
  }

  const double viol = bandwidth_violation(fw.rms);
  fw.penalty = viol > 0.0 ? problem_.penalty_weight * viol * viol : 0.0;
  return fw;
}

ObjectiveEvaluator::Breakdown ObjectiveEvaluator::breakdown(std::span<const double> x) const {
  const Forward fw = forward(x);
  return {fw.sidelobe, fw.rms, fw.penalty, fw.sidelobe + fw.penalty};
}

double ObjectiveEvaluator::value(std::span<const double> x) const {
  const Forward fw = forward(x);
  return fw.sidelobe + fw.penalty;
}

double ObjectiveEvaluator::value_and_gradient(std::span<const double> x,
                                              std::span<double> grad) const {
  require(grad.size() == dimension(), "gradient buffer has the wrong dimension");
  const Forward fw = forward(x);
  const std::size_t len = fft_len_;

  // Sidelobe term J = sum_m c_m |R_m|^2 with c symmetric in m:
  //   dJ/ds*_p = 2 dt sum_m c_m R_m s_{p+m}   (a correlation of s with q = c R)
  cvec q(len);
  for (std::size_t i = 0; i < region_lags_.size(); ++i) {
    const auto m = static_cast<std::size_t>(region_lags_[i]);
    const double c = fw.weights[i];
    if (m == 0) {
      q[0] = c * fw.corr[0];
    } else {
      q[m] = c * fw.corr[m];
      q[len - m] = c * fw.corr[len - m];
    }
  }
  // h_p = sum_j s_j q_{j-p}: correlate s against conj(q)
  cvec q_conj(len);
  for (std::size_t i = 0; i < len; ++i) q_conj[i] = std::conj(q[i]);
  const cvec fq = fft::forward(q_conj, len);

  // Penalty term: d Brms^2 / d p_k = ((f_k - centroid)^2 - Brms^2) / sum p
  double dpen_dbrms = 0.0;
  const double viol = bandwidth_violation(fw.rms);
  if (viol > 0.0) {
    const double target = problem_.bandwidth_target_hz;
    const double sign = fw.rms >= target ? 1.0 : -1.0;
    dpen_dbrms = 2.0 * problem_.penalty_weight * viol * sign / target;
  }

  cvec mix(len);
  const double band_scale = fw.rms > 0.0 ? dpen_dbrms / (2.0 * fw.rms) : 0.0;
  const double var = fw.rms * fw.rms;
  for (std::size_t k = 0; k < len; ++k) {
    // fspec of s is fw.spec; sidelobe correlation in frequency domain
    std::complex<double> v = fw.spec[k] * std::conj(fq[k]) * (2.0 * dt_);
    if (band_scale != 0.0) {
      const double d = bin_freqs_[k] - fw.centroid;
      const double ck = (d * d - var) / fw.power_sum;
      // d/ds*_p sum_k ck |S_k|^2 = sum_k ck S_k e^{+j 2 pi k p / L}
      v += band_scale * ck * fw.spec[k] * static_cast<double>(len);
    }
    mix[k] = v;
  }
  const cvec g = fft::inverse(mix);

  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t n = 0; n < samples_; ++n) {
    const double dphi = 2.0 * (g[n] * std::conj(fw.s[n])).imag();
    const double* c = &cos_table_[n * harmonics_];
    const double* s = &sin_table_[n * harmonics_];
    for (std::size_t k = 0; k < harmonics_; ++k) {
      grad[k] += dphi * c[k];
      grad[harmonics_ + k] += dphi * s[k];
    }
  }
  return fw.sidelobe + fw.penalty;
}

double evaluate_objective(const MtsfmParameters& params, const OptimizationProblem& problem) {
  require(params.num_harmonics() == problem.initial.num_harmonics(),
          "parameters and problem disagree on the harmonic count");
  return ObjectiveEvaluator(problem).value(params.flatten());
}

std::vector<double> finite_difference_gradient(const ObjectiveFn& f, std::span<const double> x,
                                               double step) {
  require(step > 0.0, "finite-difference step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    const double up = f(probe);
    probe[i] = orig - step;
    const double down = f(probe);
    probe[i] = orig;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

std::vector<double> forward_difference_gradient(const ObjectiveFn& f, std::span<const double> x,
                                                double step) {
  require(step > 0.0, "finite-difference step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  const double base = f(probe);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    g[i] = (f(probe) - base) / step;
    probe[i] = orig;
  }
  return g;
}

std::vector<double> finite_difference_gradient(const MtsfmParameters& params,
                                               const OptimizationProblem& problem, double step) {
  const ObjectiveEvaluator eval(problem);
  const auto x = params.flatten();
  return finite_difference_gradient([&](std::span<const double> v) { return eval.value(v); }, x,
                                    step);
}

}  // namespace wavedesign
