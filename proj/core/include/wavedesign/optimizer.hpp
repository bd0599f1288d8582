#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wavedesign/metrics.hpp"
#include "wavedesign/waveforms.hpp"

namespace wavedesign {

enum class ObjectiveKind { ISL, PSL };

const char* to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(const std::string& name);

/// Region-constrained sidelobe problem over MTSFM coefficients.
struct OptimizationProblem {
  MtsfmParameters initial;
  RegionSpec region;
  ObjectiveKind objective = ObjectiveKind::ISL;
  double bandwidth_target_hz = 0.0;
  /// Relative half-width of the dead band around the target, in (0, 0.5).
  double bandwidth_tolerance = 0.1;
  double penalty_weight = 1.0;
  /// Maximum objective evaluations.
  std::size_t budget = 20000;
  std::uint64_t seed = 0;
  double sample_rate_hz = 0.0;
  /// Spectrum used for the RMS bandwidth is next_pow2(zero_pad * N) long.
  std::size_t spectrum_zero_pad = 2;
  /// Log-sum-exp sharpness of the smoothed PSL objective.
  double psl_sharpness = 50.0;

  void validate() const;
  std::size_t dimension() const { return 2 * initial.num_harmonics(); }
};

struct TracePoint {
  std::size_t evaluation;
  double objective;
};

struct OptimizationResult {
  MtsfmParameters final;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  double initial_objective_db = 0.0;
  double final_objective_db = 0.0;
  /// Best-so-far objective after each iteration, tagged with the evaluation count.
  std::vector<TracePoint> trace;
  /// Stopping tolerance reached with the bandwidth constraint satisfied.
  bool converged = false;
  std::size_t evaluations_used = 0;
  double final_rms_bandwidth_hz = 0.0;
};

/// Precomputes harmonic tables and FFT sizes for one problem so repeated
/// objective calls are cheap. Immutable after construction.
class ObjectiveEvaluator {
 public:
  explicit ObjectiveEvaluator(const OptimizationProblem& problem);

  struct Breakdown {
    /// Linear region ISL (sum |R|^2 dtau / |R0|^2) or smoothed linear PSL.
    double sidelobe = 0.0;
    double rms_bandwidth_hz = 0.0;
    double penalty = 0.0;
    double total = 0.0;
  };

  std::size_t dimension() const noexcept { return 2 * harmonics_; }
  double value(std::span<const double> x) const;
  Breakdown breakdown(std::span<const double> x) const;
  /// Adjoint gradient; returns the objective value.
  double value_and_gradient(std::span<const double> x, std::span<double> grad) const;
  /// Relative bandwidth violation beyond the tolerance band (<= 0 when feasible).
  double bandwidth_violation(double rms_bandwidth_hz) const;

 private:
  struct Forward;
  Forward forward(std::span<const double> x) const;

  const OptimizationProblem problem_;
  std::size_t harmonics_ = 0;
  std::size_t samples_ = 0;
  std::size_t fft_len_ = 0;
  double dt_ = 0.0;
  double amplitude_ = 0.0;
  std::vector<double> cos_table_, sin_table_;  // [n * K + k]
  std::vector<double> bin_freqs_;
  std::vector<long> region_lags_;  // m >= 0 listed once; both signs are in the region
};

/// metric(region) + penalty_weight * max(0, |B_rms - B_target| / B_target - tol)^2.
double evaluate_objective(const MtsfmParameters& params, const OptimizationProblem& problem);

/// 10 log10 for ISL values, 20 log10 for PSL values.
double objective_db(double value, ObjectiveKind kind);

using ObjectiveFn = std::function<double(std::span<const double>)>;
/// Returns f(x) and writes the gradient.
using GradientFn = std::function<double(std::span<const double>, std::span<double>)>;

/// Central differences, step h per coordinate.
std::vector<double> finite_difference_gradient(const ObjectiveFn& f, std::span<const double> x,
                                               double step);
std::vector<double> forward_difference_gradient(const ObjectiveFn& f, std::span<const double> x,
                                                double step);
/// Central differences of evaluate_objective over the flattened coefficients.
std::vector<double> finite_difference_gradient(const MtsfmParameters& params,
                                               const OptimizationProblem& problem, double step);

/// Generic unconstrained minimizer output.
struct MinimizeOutcome {
  std::vector<double> x;
  double value = 0.0;
  double initial_value = 0.0;
  std::vector<TracePoint> trace;
  bool converged = false;
  std::size_t evaluations = 0;
};

struct NelderMeadOptions {
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  /// Base edge length of the initial simplex; each edge is jittered by the seed.
  double initial_step = 0.1;
  double diameter_tolerance = 1e-8;
};

/// Adaptive-coefficient simplex method (reflection 1, expansion 1 + 2/n,
/// contraction 0.75 - 1/(2n), shrink 1 - 1/n).
MinimizeOutcome nelder_mead(const ObjectiveFn& f, std::vector<double> x0,
                            const NelderMeadOptions& options);
OptimizationResult minimize_nelder_mead(const OptimizationProblem& problem);
OptimizationResult minimize_nelder_mead(const OptimizationProblem& problem,
                                        const NelderMeadOptions& options);

enum class GradientSource { FiniteDifference, Adjoint };
enum class DescentDirection { Steepest, LBFGS };

/// Backtracking line-search schedule.
struct StepSchedule {
  double initial_step = 1.0;
  double shrink = 0.5;
  double growth = 2.0;
  double armijo = 1e-4;
  std::size_t max_backtracks = 50;
};

struct GradientDescentOptions {
  StepSchedule schedule;
  GradientSource gradient = GradientSource::Adjoint;
  DescentDirection direction = DescentDirection::LBFGS;
  std::size_t history = 20;
  double fd_step = 1e-6;
  double step_tolerance = 1e-8;
  double gradient_tolerance = 1e-14;
};

/// Descent with Armijo backtracking. A call to `fg` is charged
/// `gradient_cost` evaluations, a call to `f` one.
MinimizeOutcome gradient_descent(const ObjectiveFn& f, const GradientFn& fg,
                                 std::size_t gradient_cost, std::vector<double> x0,
                                 std::size_t budget, const GradientDescentOptions& options);
/// An adjoint value-and-gradient call is charged 2 evaluations; a finite
/// difference gradient 2 x dimension.
OptimizationResult minimize_gradient_descent(const OptimizationProblem& problem,
                                             const GradientDescentOptions& options = {});

}  // namespace wavedesign
