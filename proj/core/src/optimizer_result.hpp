#pragma once

#include "wavedesign/optimizer.hpp"

namespace wavedesign::detail {

inline OptimizationResult to_result(const OptimizationProblem& problem,
                                    const ObjectiveEvaluator& eval, const MinimizeOutcome& m) {
  OptimizationResult r;
  r.final = MtsfmParameters::from_flat(m.x, problem.initial.duration_s);
  r.initial_objective = m.initial_value;
  r.final_objective = m.value;
  r.initial_objective_db = objective_db(m.initial_value, problem.objective);
  r.final_objective_db = objective_db(m.value, problem.objective);
  r.trace = m.trace;
  r.evaluations_used = m.evaluations;
  const auto b = eval.breakdown(m.x);
  r.final_rms_bandwidth_hz = b.rms_bandwidth_hz;
  r.converged = m.converged && eval.bandwidth_violation(b.rms_bandwidth_hz) <= 1e-6;
  return r;
}

}  // namespace wavedesign::detail
