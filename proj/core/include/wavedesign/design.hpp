#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wavedesign/optimizer.hpp"

namespace wavedesign {

/// Recipe for a region-optimized MTSFM pulse at a given bandwidth and length.
struct RegionDesignConfig {
  double bandwidth_hz = 256.0;
  double duration_s = 1.0;
  std::size_t harmonics = 32;
  /// Sample rate as a multiple of the bandwidth.
  double oversample = 8.0;
  /// Spectral taper of the starting sweep: 0 is an LFM, 1 a raised cosine.
  double taper = 1.0;
  /// Width of the starting sweep; zero selects the bandwidth.
  double sweep_bandwidth_hz = 0.0;
  /// Zero selects B / sqrt(12), the RMS width of a flat band of width B.
  double rms_target_hz = 0.0;
  double bandwidth_tolerance = 0.2;
  /// Zero selects 10 / fs (the ISL objective carries units of seconds).
  double penalty_weight = 0.0;
  /// Standard deviation, in radians, of the seeded jitter on each coefficient.
  double perturbation = 1e-3;
  ObjectiveKind objective = ObjectiveKind::ISL;
  std::size_t budget = 20000;
  std::uint64_t seed = 1;
  /// Evaluations per local descent; the rest of the budget goes to seeded
  /// restarts from perturbations of the best point so far.
  std::size_t local_budget = 3000;
  /// Restart jitter on harmonic k is N(0, 1) * s / k radians, s drawn from these.
  std::vector<double> hop_scales = {0.3, 1.0, 3.0};
};

OptimizationProblem make_region_design_problem(const RegionDesignConfig& config);

/// L-BFGS on the log of the objective using the adjoint gradient, followed
/// by basin-hopping restarts until the budget is spent.
OptimizationResult design_region_mtsfm(const RegionDesignConfig& config);

}  // namespace wavedesign
