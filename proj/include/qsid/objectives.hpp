#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsid/dynamics.hpp"
#include "qsid/layout.hpp"

namespace qsid {

struct ObjectiveDescriptor {
  std::string method;
  std::size_t steps = 0;
  std::size_t n = 0;
  std::size_t num_ops = 0;
  std::optional<double> penalty_weight;
};

/// Value-and-gradient callable over a flat real parameter vector.
///
/// The evaluator returns f(x) and, when `grad` is non-empty, writes the
/// gradient into it. Evaluation is const and reentrant.
class ObjectiveFunction {
 public:
  using Evaluator = std::function<double(std::span<const double> x, std::span<double> grad)>;

  ObjectiveFunction(std::size_t dimension, Evaluator evaluator, ObjectiveDescriptor descriptor = {},
                    std::optional<ParameterLayout> layout = std::nullopt);

  double operator()(std::span<const double> x, std::span<double> grad = {}) const;

  std::size_t dimension() const noexcept { return dimension_; }
  const ObjectiveDescriptor& descriptor() const noexcept { return descriptor_; }
  const std::optional<ParameterLayout>& layout() const noexcept { return layout_; }

 private:
  std::size_t dimension_;
  Evaluator evaluator_;
  ObjectiveDescriptor descriptor_;
  std::optional<ParameterLayout> layout_;
};

inline constexpr double kDefaultPenaltyWeight = 10.0;

/// sum_{i<N} ||sum_k E_k rho_i E_k^dagger - rho_{i+1}||_F^2
///   + mu ||sum_k E_k^dagger E_k - 1||_F^2
ObjectiveFunction kraus_objective(const TimeSeries& data, std::size_t num_ops,
                                  double penalty_weight = kDefaultPenaltyWeight);

/// The N = 1 case of kraus_objective for a single input/output pair.
ObjectiveFunction kraus_single_step_objective(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                              std::size_t num_ops,
                                              double penalty_weight = kDefaultPenaltyWeight);

/// sum_{i=1..N} ||rho_i - rho_{i-1} - dt L[(rho_i + rho_{i-1}) / 2]||_F^2
ObjectiveFunction pade_objective(const TimeSeries& data, std::size_t num_jumps);

enum class QuadratureRule { kTrapezoid, kSimpson };

/// S_i ~ integral of rho over [0, i dt] for i = 0..N (S_0 = 0). Simpson is
/// used on even prefixes; odd prefixes add a trapezoid on the last interval.
std::vector<ComplexMatrix> cumulative_integral(const TimeSeries& data, QuadratureRule rule);

/// sum_{i=1..N} ||rho_i - rho_0 - L[S_i]||_F^2
ObjectiveFunction integral_objective(const TimeSeries& data, std::size_t num_jumps, QuadratureRule rule);

}  // namespace qsid
