#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "wavedesign/error.hpp"
#include "optimizer_result.hpp"
#include "wavedesign/optimizer.hpp"

namespace wavedesign {

using detail::require;

MinimizeOutcome nelder_mead(const ObjectiveFn& f, std::vector<double> x0,
                            const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  require(n >= 1, "Nelder-Mead needs at least one dimension");
  require(options.budget >= n + 1, "budget must be at least dimension + 1");
  require(options.initial_step > 0.0, "initial simplex step must be positive");

  const double dn = static_cast<double>(n);
  const double c_reflect = 1.0;
  const double c_expand = 1.0 + 2.0 / dn;
  const double c_contract = 0.75 - 1.0 / (2.0 * dn);
  const double c_shrink = n > 1 ? 1.0 - 1.0 / dn : 0.5;

  MinimizeOutcome out;
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  fv[0] = eval(x0);
  out.initial_value = fv[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = std::max(1.0, std::abs(x0[i]));
    simplex[i + 1][i] += options.initial_step * scale * jitter(rng);
    fv[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s2[i] = std::move(simplex[order[i]]);
      f2[i] = fv[order[i]];
    }
    simplex = std::move(s2);
    fv = std::move(f2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = simplex[i][j] - simplex[0][j];
        acc += v * v;
      }
      d = std::max(d, std::sqrt(acc));
    }
    return d;
  };

  sort_simplex();
  out.trace.push_back({evals, fv[0]});
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  bool converged = false;

  while (true) {
    if (diameter() < options.diameter_tolerance) {
      converged = true;
      break;
    }
    // a full iteration may need up to n + 2 evaluations (shrink)
    if (evals + 2 > options.budget) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / dn;

    for (std::size_t j = 0; j < n; ++j)
      xr[j] = centroid[j] + c_reflect * (centroid[j] - simplex[n][j]);
    const double fr = eval(xr);

    if (fr < fv[0]) {
      for (std::size_t j = 0; j < n; ++j)
        xe[j] = centroid[j] + c_expand * (xr[j] - centroid[j]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      const bool outside = fr < fv[n];
      for (std::size_t j = 0; j < n; ++j) {
        xc[j] = outside ? centroid[j] + c_contract * (xr[j] - centroid[j])
                        : centroid[j] + c_contract * (simplex[n][j] - centroid[j]);
      }
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        if (evals + n > options.budget) break;
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + c_shrink * (simplex[i][j] - simplex[0][j]);
          fv[i] = eval(simplex[i]);
        }
      }
    }
    sort_simplex();
    out.trace.push_back({evals, fv[0]});
  }

  out.x = simplex[0];
  out.value = fv[0];
  out.converged = converged;
  out.evaluations = evals;
  return out;
}


OptimizationResult minimize_nelder_mead(const OptimizationProblem& problem,
                                        const NelderMeadOptions& options) {
  const ObjectiveEvaluator eval(problem);
  const auto m = nelder_mead([&](std::span<const double> x) { return eval.value(x); },
                             problem.initial.flatten(), options);
  return detail::to_result(problem, eval, m);
}

OptimizationResult minimize_nelder_mead(const OptimizationProblem& problem) {
  NelderMeadOptions opts;
  opts.budget = problem.budget;
  opts.seed = problem.seed;
  return minimize_nelder_mead(problem, opts);
}

}  // namespace wavedesign
