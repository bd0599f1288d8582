#include "wavedesign/design.hpp"

#include <cmath>
#include <random>

#include "optimizer_result.hpp"
#include "wavedesign/error.hpp"

namespace wavedesign {

using detail::require;

OptimizationProblem make_region_design_problem(const RegionDesignConfig& c) {
  require(c.bandwidth_hz > 0.0 && c.duration_s > 0.0, "bandwidth and duration must be positive");
  require(c.harmonics >= 1, "need at least one harmonic");
  require(c.oversample >= 2.0, "oversample must be at least 2");
  require(c.taper >= 0.0 && c.taper <= 1.0, "taper must lie in [0, 1]");
  require(c.sweep_bandwidth_hz >= 0.0, "sweep bandwidth must be nonnegative");
  require(c.perturbation >= 0.0, "perturbation must be nonnegative");

  OptimizationProblem p;
  const double sweep = c.sweep_bandwidth_hz > 0.0 ? c.sweep_bandwidth_hz : c.bandwidth_hz;
  p.initial = tapered_fm_phase_fit(c.harmonics, sweep, c.duration_s, c.taper);
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  if (c.perturbation > 0.0) {
    for (auto& a : p.initial.alpha) a += c.perturbation * jitter(rng);
    for (auto& b : p.initial.beta) b += c.perturbation * jitter(rng);
  }
  p.sample_rate_hz = c.oversample * c.bandwidth_hz;
  p.region = default_region(c.bandwidth_hz, c.duration_s);
  p.objective = c.objective;
  p.bandwidth_target_hz = c.rms_target_hz > 0.0 ? c.rms_target_hz : c.bandwidth_hz / std::sqrt(12.0);
  p.bandwidth_tolerance = c.bandwidth_tolerance;
  p.penalty_weight = c.penalty_weight > 0.0 ? c.penalty_weight : 10.0 / p.sample_rate_hz;
  p.budget = c.budget;
  p.seed = c.seed;
  p.validate();
  return p;
}

OptimizationResult design_region_mtsfm(const RegionDesignConfig& config) {
  require(config.local_budget >= 4, "local budget must be at least 4 evaluations");
  require(!config.hop_scales.empty(), "need at least one restart scale");
  const auto problem = make_region_design_problem(config);
  const ObjectiveEvaluator eval(problem);
  const std::size_t n = eval.dimension();
  const std::size_t K = n / 2;

  // Descent on log f: sidelobe energy spans decades over a run.
  ObjectiveFn f = [&](std::span<const double> x) { return std::log(eval.value(x)); };
  GradientFn fg = [&](std::span<const double> x, std::span<double> g) {
    const double v = eval.value_and_gradient(x, g);
    for (auto& gi : g) gi /= v;
    return std::log(v);
  };

  GradientDescentOptions opts;
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, config.hop_scales.size() - 1);

  MinimizeOutcome best;
  best.x = problem.initial.flatten();
  std::size_t used = 0;
  bool first = true;
  std::vector<TracePoint> trace;
  while (used + 4 <= problem.budget) {
    std::vector<double> x0 = best.x;
    if (!first) {
      const double s = config.hop_scales[pick(rng)];
      for (std::size_t i = 0; i < n; ++i)
        x0[i] += normal(rng) * s / static_cast<double>(i % K + 1);
    }
    const std::size_t local = std::min(config.local_budget, problem.budget - used);
    auto m = gradient_descent(f, fg, 2, std::move(x0), local, opts);
    for (const auto& tp : m.trace) {
      const double v = std::exp(tp.objective);
      const double prev = trace.empty() ? v : trace.back().objective;
      trace.push_back({used + tp.evaluation, std::min(prev, v)});
    }
    used += m.evaluations;
    if (first) best.initial_value = std::exp(m.initial_value);
    if (first || m.value < best.value) {
      best.x = std::move(m.x);
      best.value = m.value;
      best.converged = m.converged;
    }
    first = false;
  }
  best.value = std::exp(best.value);
  best.trace = std::move(trace);
  best.evaluations = used;
  return detail::to_result(problem, eval, best);
}

}  // namespace wavedesign
