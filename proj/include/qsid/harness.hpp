#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsid/metrics.hpp"

namespace qsid {

inline constexpr int kConfigFormatVersion = 1;
inline constexpr int kRecordFormatVersion = 1;
inline constexpr std::size_t kHistogramBins = 25;

struct ExperimentConfig {
  std::size_t n = 2;
  std::size_t num_jumps_true = 1;
  std::size_t num_kraus_ops = 4;
  std::size_t num_jumps_fit = 1;
  std::size_t steps = 49;
  double dt = 0.1;
  double jump_scale = kDefaultJumpScale;
  std::vector<IdentificationMethod> methods{IdentificationMethod::kKraus, IdentificationMethod::kPade,
                                            IdentificationMethod::kTrapezoid, IdentificationMethod::kSimpson};
  std::vector<double> noise_grid{0.0, 0.01, 0.05, 0.1, 0.2};
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  OptimizerConfig optimizer;
  double penalty_weight = kDefaultPenaltyWeight;
  double completeness_target = 1e-3;
  std::size_t max_penalty_rounds = 5;
  /// 0 picks the hardware concurrency. QSID_WORKERS overrides either.
  std::size_t workers = 0;
  /// When false, wall_time is written as 0 so record streams are reproducible.
  bool record_timing = false;

  void validate() const;
};

Json config_to_json(const ExperimentConfig& cfg);
/// Missing keys take their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const Json& doc);

/// Seed of the ground-truth system for one trial, shared by every method and
/// noise level so cells are compared on identical systems.
std::uint64_t trial_data_seed(std::uint64_t master_seed, std::size_t trial_index);
/// Optimizer seed for one (method, w, trial) cell entry.
std::uint64_t trial_optimizer_seed(std::uint64_t master_seed, IdentificationMethod method, std::size_t w_index,
                                   std::size_t trial_index);

struct TrialRecord {
  std::string trial_id;
  std::size_t trial_index = 0;
  IdentificationMethod method = IdentificationMethod::kPade;
  double w = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t opt_seed = 0;
  bool converged = false;
  std::optional<double> f_min;
  double final_objective = 0.0;
  std::optional<double> completeness_residual;
  double grad_norm = 0.0;
  std::size_t evals = 0;
  std::size_t local_runs = 0;
  double wall_time = 0.0;
  bool physical = true;
  std::string error;
};

Json record_to_json(const TrialRecord& r);
TrialRecord record_from_json(const Json& doc);

/// Runs a single trial end to end. Failures are captured in `error`.
TrialRecord run_trial(const ExperimentConfig& cfg, IdentificationMethod method, std::size_t w_index,
                      std::size_t trial_index);

struct CellSummary {
  IdentificationMethod method = IdentificationMethod::kPade;
  double w = 0.0;
  std::size_t trials = 0;
  std::size_t converged = 0;
  /// Quartiles of F_min over converged trials with a recorded F_min.
  std::optional<double> q1;
  std::optional<double> median;
  std::optional<double> q3;
  std::array<std::size_t, kHistogramBins> histogram{};

  double convergence_rate() const { return trials == 0 ? 0.0 : static_cast<double>(converged) / trials; }
};

/// Cells ordered by method, then w.
std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);
std::size_t histogram_bin(double f_min);

struct ExperimentSummary {
  std::vector<CellSummary> cells;
  std::size_t records = 0;
  std::size_t failed_trials = 0;
};

/// Runs every (method, w, trial) and writes one JSON record per line to
/// `out_path` in task order. The file is truncated first.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_path);

std::vector<TrialRecord> read_records(const std::string& path);
std::string summary_csv(const std::vector<CellSummary>& cells);
/// Reads a record stream and writes the per-cell CSV table.
std::vector<CellSummary> report(const std::string& records_path, const std::string& out_csv);

}  // namespace qsid
