#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qsid/dynamics.hpp"
#include "qsid/optimizer.hpp"
#include "qsid/wire.hpp"

namespace qsid {

// ---------------------------------------------------------------------------
// Fidelity

struct FidelityResult {
  double value = 0.0;
  /// How far the raw value fell outside [0, 1] before clamping.
  double clamped_by = 0.0;
};

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
/// Both inputs must be valid states at tolerance 1e-6.
FidelityResult fidelity_detailed(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// min_i F(exact_i, sid_i) over i = 0..N.
double min_fidelity(const TimeSeries& exact, const TimeSeries& sid);

// ---------------------------------------------------------------------------
// Identification

enum class IdentificationMethod { kKraus, kPade, kTrapezoid, kSimpson };

std::string_view method_name(IdentificationMethod m);
/// "kraus", "lindblad-pade", "lindblad-trapezoid" or "lindblad-simpson".
std::string_view model_kind_name(IdentificationMethod m);
IdentificationMethod parse_method(std::string_view name);

struct IdentifyConfig {
  OptimizerConfig optimizer;
  double penalty_weight = 10.0;       // initial mu for Kraus
  double completeness_target = 1e-3;  // stop continuation once r <= this
  std::size_t max_penalty_rounds = 5;
};

struct IdentifiedModel {
  IdentificationMethod method = IdentificationMethod::kPade;
  std::variant<KrausSet, LindbladModel> model;
  OptimizationResult optimization;
  std::optional<double> completeness_residual;  // Kraus only
  double penalty_weight = 0.0;                  // final mu (Kraus only)
  std::size_t penalty_rounds = 0;

  std::size_t dim() const;
  bool converged() const noexcept { return optimization.converged; }
};

/// Builds the objective for `method`, seeds the search (Kraus: E_1 near the
/// identity, the rest near zero; Lindblad: all parameters small Gaussian),
/// runs basin hopping and decodes the best point. Kraus runs add penalty
/// continuation (mu *= 10) until the completeness residual reaches the
/// target or the round budget is spent. Unconverged runs are returned, not
/// thrown.
IdentifiedModel identify(const TimeSeries& data, IdentificationMethod method, std::size_t num_ops,
                         const IdentifyConfig& cfg);

/// Initial parameter vector used by identify().
std::vector<double> initial_parameters(IdentificationMethod method, std::size_t n, std::size_t num_ops,
                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Re-propagation

inline constexpr double kRepropagationPsdTol = 1e-4;

struct Repropagation {
  std::optional<TimeSeries> series;  // empty when non-physical
  bool physical = true;
  double max_eigen_clamp = 0.0;      // largest negative eigenvalue clamped away
  double max_trace_deviation = 0.0;  // before renormalization
  std::string diagnostic;
};

/// Propagates rho0 with the identified model for `steps` steps of `dt`.
/// States are re-Hermitized, eigenvalues down to -1e-4 are clamped and the
/// trace renormalized; a deeper violation marks the run non-physical.
Repropagation repropagate(const IdentifiedModel& m, const DensityMatrix& rho0, double dt, std::size_t steps);

// ---------------------------------------------------------------------------
// Serialization: {version, kind, n, hamiltonian + jumps | kraus,
// completeness_residual, penalty_weight, penalty_rounds, optimization}

inline constexpr int kModelFormatVersion = 1;

Json model_to_json(const IdentifiedModel& m);
IdentifiedModel model_from_json(const Json& doc);
void write_model(const std::string& path, const IdentifiedModel& m);
IdentifiedModel read_model(const std::string& path);

}  // namespace qsid
