#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsid/objectives.hpp"

namespace qsid {

struct OptimizerConfig {
  double g_tol = 1e-6;        // gradient-norm stop
  std::size_t max_iter = 500;  // per local run
  std::size_t hops = 30;
  double step_size = 0.5;      // hop perturbation half-width
  double temperature = 1.0;    // Metropolis scale
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  std::uint64_t seed = 0;

  /// Throws ErrorCode::kInvalidArgument on inconsistent settings.
  void validate() const;
};

struct OptimizationResult {
  std::vector<double> best_params;
  double best_value = 0.0;
  double best_grad_norm = 0.0;
  bool converged = false;
  std::size_t local_runs = 0;
  std::size_t total_evals = 0;
  std::size_t iterations = 0;
  double wall_time = 0.0;  // seconds
  std::string message;
};

/// BFGS with inverse-Hessian updates and a strong-Wolfe line search.
/// Stops on ||grad|| <= g_tol (converged), max_iter, or a line-search
/// failure that persists after one reset of the Hessian to the identity.
/// The returned point is never worse than x0.
OptimizationResult bfgs_minimize(const ObjectiveFunction& f, std::span<const double> x0,
                                 const OptimizerConfig& cfg);

/// Basin hopping around bfgs_minimize: uniform perturbation of the current
/// point, local minimization, Metropolis acceptance. The result reports the
/// lowest converged minimum, or the lowest minimum overall when no local run
/// converged; it is `converged` iff at least one local run converged.
OptimizationResult basin_hopping(const ObjectiveFunction& f, std::span<const double> x0,
                                 const OptimizerConfig& cfg);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h. When
/// `relative` is set the step for coordinate i is h (1 + |x_i|).
std::vector<double> finite_diff_gradient(const ObjectiveFunction& f, std::span<const double> x, double h,
                                         bool relative = false);

}  // namespace qsid
