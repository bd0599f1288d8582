#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "optimizer_result.hpp"
#include "wavedesign/error.hpp"
#include "wavedesign/optimizer.hpp"

namespace wavedesign {

using detail::require;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Pair {
  std::vector<double> s, y;
  double rho;
};

// L-BFGS two-loop recursion: returns -H g
std::vector<double> lbfgs_direction(const std::deque<Pair>& hist, const std::vector<double>& g) {
  std::vector<double> q(g);
  std::vector<double> alpha(hist.size());
  for (std::size_t i = hist.size(); i-- > 0;) {
    alpha[i] = hist[i].rho * dot(hist[i].s, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * hist[i].y[j];
  }
  if (!hist.empty()) {
    const auto& last = hist.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (auto& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double beta = hist[i].rho * dot(hist[i].y, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] += hist[i].s[j] * (alpha[i] - beta);
  }
  for (auto& v : q) v = -v;
  return q;
}

}  // namespace

MinimizeOutcome gradient_descent(const ObjectiveFn& f, const GradientFn& fg,
                                 std::size_t gradient_cost, std::vector<double> x0,
                                 std::size_t budget, const GradientDescentOptions& options) {
  const std::size_t n = x0.size();
  const auto& sched = options.schedule;
  require(n >= 1, "gradient descent needs at least one dimension");
  require(budget >= 2, "budget must be at least two evaluations");
  require(gradient_cost >= 1 && budget >= gradient_cost, "budget cannot cover one gradient");
  require(sched.initial_step > 0.0, "initial step must be positive");
  require(sched.shrink > 0.0 && sched.shrink < 1.0, "shrink factor must lie in (0, 1)");
  require(sched.growth >= 1.0, "growth factor must be >= 1");

  MinimizeOutcome out;
  std::size_t evals = 0;
  std::vector<double> x = std::move(x0);
  std::vector<double> g(n), g_new(n), xt(n);
  double fx = fg(x, g);
  evals += gradient_cost;
  out.initial_value = fx;
  out.trace.push_back({evals, fx});

  std::deque<Pair> hist;
  double step_scale = sched.initial_step;
  bool converged = false;

  while (true) {
    const double gnorm = norm2(g);
    if (!(gnorm > options.gradient_tolerance)) {
      converged = true;
      break;
    }
    std::vector<double> d;
    double t;
    if (options.direction == DescentDirection::LBFGS && !hist.empty()) {
      d = lbfgs_direction(hist, g);
      t = 1.0;
    } else {
      d.resize(n);
      for (std::size_t j = 0; j < n; ++j) d[j] = -g[j];
      t = options.direction == DescentDirection::LBFGS ? sched.initial_step / std::max(gnorm, 1.0)
                                                       : step_scale;
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      hist.clear();
      for (std::size_t j = 0; j < n; ++j) d[j] = -g[j];
      slope = -gnorm * gnorm;
      t = sched.initial_step / std::max(gnorm, 1.0);
    }

    bool accepted = false, out_of_budget = false;
    double ft = fx;
    for (std::size_t b = 0; b <= sched.max_backtracks; ++b) {
      if (evals + 1 > budget) {
        out_of_budget = true;
        break;
      }
      for (std::size_t j = 0; j < n; ++j) xt[j] = x[j] + t * d[j];
      ft = f(xt);
      ++evals;
      if (ft < fx && ft <= fx + sched.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= sched.shrink;
    }
    if (out_of_budget) break;
    if (!accepted) {
      // no decrease along a descent direction down to the smallest trial step
      converged = true;
      break;
    }

    const double step_norm = t * norm2(d);
    if (evals + gradient_cost > budget) {
      x = xt;
      fx = ft;
      out.trace.push_back({evals, fx});
      break;
    }
    const double fnew = fg(xt, g_new);
    evals += gradient_cost;

    if (options.direction == DescentDirection::LBFGS) {
      Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        p.s[j] = xt[j] - x[j];
        p.y[j] = g_new[j] - g[j];
      }
      const double sy = dot(p.s, p.y);
      if (sy > 1e-12 * norm2(p.s) * norm2(p.y)) {
        p.rho = 1.0 / sy;
        hist.push_back(std::move(p));
        if (hist.size() > options.history) hist.pop_front();
      }
    } else {
      step_scale = t * sched.growth;
    }
    x = xt;
    fx = std::min(ft, fnew);
    std::swap(g, g_new);
    out.trace.push_back({evals, fx});
    if (step_norm < options.step_tolerance) {
      converged = true;
      break;
    }
  }

  out.x = std::move(x);
  out.value = fx;
  out.converged = converged;
  out.evaluations = evals;
  return out;
}

OptimizationResult minimize_gradient_descent(const OptimizationProblem& problem,
                                             const GradientDescentOptions& options) {
  const ObjectiveEvaluator eval(problem);
  const std::size_t n = eval.dimension();
  ObjectiveFn f = [&](std::span<const double> x) { return eval.value(x); };
  GradientFn fg;
  std::size_t cost = 0;
  if (options.gradient == GradientSource::Adjoint) {
    fg = [&](std::span<const double> x, std::span<double> g) {
      return eval.value_and_gradient(x, g);
    };
    cost = 2;
  } else {
    fg = [&, step = options.fd_step](std::span<const double> x, std::span<double> g) {
      const auto fd = finite_difference_gradient(f, x, step);
      std::copy(fd.begin(), fd.end(), g.begin());
      return f(x);
    };
    cost = 2 * n + 1;
  }
  const auto m = gradient_descent(f, fg, cost, problem.initial.flatten(), problem.budget, options);
  return detail::to_result(problem, eval, m);
}

}  // namespace wavedesign
