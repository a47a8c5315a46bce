#include <chrono>
#include <cmath>
#include <random>

#include "qsid/dynamics.hpp"
#include "qsid/error.hpp"
#include "qsid/optimizer.hpp"
#include "qsid/seed.hpp"

namespace qsid {

namespace {

// Converged minima outrank unconverged ones; within a class, lower wins.
bool improves(const OptimizationResult& cand, const OptimizationResult& best) {
  if (cand.converged != best.converged) return cand.converged;
  return cand.best_value < best.best_value;
}

}  // namespace

OptimizationResult basin_hopping(const ObjectiveFunction& f, std::span<const double> x0,
                                 const OptimizerConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(hash64({cfg.seed, kOptimizerStream}));
  std::uniform_real_distribution<double> step(-cfg.step_size, cfg.step_size);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  OptimizationResult best = bfgs_minimize(f, x0, cfg);
  std::size_t total_evals = best.total_evals;
  std::size_t local_runs = 1;
  std::size_t iterations = best.iterations;
  std::vector<double> current = best.best_params;
  double current_value = best.best_value;
  bool current_converged = best.converged;

  std::vector<double> trial(current.size());
  for (std::size_t hop = 0; hop < cfg.hops; ++hop) {
    for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = current[i] + step(rng);
    const double u = unit(rng);
    OptimizationResult local = bfgs_minimize(f, trial, cfg);
    ++local_runs;
    total_evals += local.total_evals;
    iterations += local.iterations;
    if (!std::isfinite(local.best_value)) continue;

    if (improves(local, best)) best = local;
    // A converged current point is only ever replaced by another converged one.
    if (!local.converged && current_converged) continue;
    const double delta = local.best_value - current_value;
    if (delta <= 0.0 || u < std::exp(-delta / cfg.temperature)) {
      current = local.best_params;
      current_value = local.best_value;
      current_converged = local.converged;
    }
  }

  best.local_runs = local_runs;
  best.total_evals = total_evals;
  best.iterations = iterations;
  best.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

}  // namespace qsid
