#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "qsid/error.hpp"
#include "qsid/harness.hpp"
#include "qsid/seed.hpp"

namespace qsid {

void ExperimentConfig::validate() const {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "experiment: n must be at least 2");
  if (num_jumps_true < 1 || num_kraus_ops < 1 || num_jumps_fit < 1) {
    fail(ErrorCode::kInvalidArgument, "experiment: operator counts must be at least 1");
  }
  if (steps < 1) fail(ErrorCode::kInvalidArgument, "experiment: steps must be at least 1");
  if (!(dt > 0.0)) fail(ErrorCode::kInvalidArgument, "experiment: dt must be positive");
  if (!(jump_scale >= 0.0)) fail(ErrorCode::kInvalidArgument, "experiment: jump_scale must be non-negative");
  if (methods.empty()) fail(ErrorCode::kInvalidArgument, "experiment: no methods selected");
  if (noise_grid.empty()) fail(ErrorCode::kInvalidArgument, "experiment: empty noise grid");
  for (double w : noise_grid) {
    if (!(w >= 0.0 && w < 1.0)) fail(ErrorCode::kInvalidArgument, "experiment: every w must lie in [0, 1)");
  }
  if (trials < 1) fail(ErrorCode::kInvalidArgument, "experiment: trials must be at least 1");
  if (steps < 2 && std::find(methods.begin(), methods.end(), IdentificationMethod::kSimpson) != methods.end()) {
    fail(ErrorCode::kInvalidArgument, "experiment: Simpson's rule needs steps >= 2");
  }
  if (!(penalty_weight > 0.0)) fail(ErrorCode::kInvalidArgument, "experiment: penalty_weight must be positive");
  if (!(completeness_target > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "experiment: completeness_target must be positive");
  }
  if (max_penalty_rounds < 1) fail(ErrorCode::kInvalidArgument, "experiment: max_penalty_rounds must be >= 1");
  optimizer.validate();
}

namespace {

void reject_unknown_keys(const Json& doc, std::initializer_list<const char*> allowed, const char* what) {
  if (!doc.is_object()) fail(ErrorCode::kSchema, std::string(what) + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : doc.items()) {
    if (!keys.contains(key)) fail(ErrorCode::kSchema, std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_opt(const Json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

}  // namespace

Json config_to_json(const ExperimentConfig& cfg) {
  Json methods = Json::array();
  for (auto m : cfg.methods) methods.push_back(method_name(m));
  const OptimizerConfig& o = cfg.optimizer;
  return Json{{"version", kConfigFormatVersion},
              {"n", cfg.n},
              {"num_jumps_true", cfg.num_jumps_true},
              {"num_kraus_ops", cfg.num_kraus_ops},
              {"num_jumps_fit", cfg.num_jumps_fit},
              {"steps", cfg.steps},
              {"dt", cfg.dt},
              {"jump_scale", cfg.jump_scale},
              {"methods", methods},
              {"noise_grid", cfg.noise_grid},
              {"trials", cfg.trials},
              {"master_seed", cfg.master_seed},
              {"optimizer",
               {{"g_tol", o.g_tol},
                {"max_iter", o.max_iter},
                {"hops", o.hops},
                {"step_size", o.step_size},
                {"temperature", o.temperature},
                {"wolfe_c1", o.wolfe_c1},
                {"wolfe_c2", o.wolfe_c2}}},
              {"penalty_weight", cfg.penalty_weight},
              {"completeness_target", cfg.completeness_target},
              {"max_penalty_rounds", cfg.max_penalty_rounds},
              {"workers", cfg.workers},
              {"record_timing", cfg.record_timing}};
}

ExperimentConfig config_from_json(const Json& doc) {
  reject_unknown_keys(doc,
                      {"version", "n", "num_jumps_true", "num_kraus_ops", "num_jumps_fit", "steps", "dt",
                       "jump_scale", "methods", "noise_grid", "trials", "master_seed", "optimizer",
                       "penalty_weight", "completeness_target", "max_penalty_rounds", "workers", "record_timing"},
                      "experiment config");
  if (doc.contains("version")) require_version(doc, kConfigFormatVersion, "experiment config");
  ExperimentConfig cfg;
  try {
    read_opt(doc, "n", cfg.n);
    read_opt(doc, "num_jumps_true", cfg.num_jumps_true);
    read_opt(doc, "num_kraus_ops", cfg.num_kraus_ops);
    read_opt(doc, "num_jumps_fit", cfg.num_jumps_fit);
    read_opt(doc, "steps", cfg.steps);
    read_opt(doc, "dt", cfg.dt);
    read_opt(doc, "jump_scale", cfg.jump_scale);
    if (doc.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : doc.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    read_opt(doc, "noise_grid", cfg.noise_grid);
    read_opt(doc, "trials", cfg.trials);
    read_opt(doc, "master_seed", cfg.master_seed);
    if (doc.contains("optimizer")) {
      const Json& o = doc.at("optimizer");
      reject_unknown_keys(o, {"g_tol", "max_iter", "hops", "step_size", "temperature", "wolfe_c1", "wolfe_c2"},
                          "optimizer config");
      read_opt(o, "g_tol", cfg.optimizer.g_tol);
      read_opt(o, "max_iter", cfg.optimizer.max_iter);
      read_opt(o, "hops", cfg.optimizer.hops);
      read_opt(o, "step_size", cfg.optimizer.step_size);
      read_opt(o, "temperature", cfg.optimizer.temperature);
      read_opt(o, "wolfe_c1", cfg.optimizer.wolfe_c1);
      read_opt(o, "wolfe_c2", cfg.optimizer.wolfe_c2);
    }
    read_opt(doc, "penalty_weight", cfg.penalty_weight);
    read_opt(doc, "completeness_target", cfg.completeness_target);
    read_opt(doc, "max_penalty_rounds", cfg.max_penalty_rounds);
    read_opt(doc, "workers", cfg.workers);
    read_opt(doc, "record_timing", cfg.record_timing);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchema, std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::uint64_t trial_data_seed(std::uint64_t master_seed, std::size_t trial_index) {
  return hash64({master_seed, kSystemStream, trial_index});
}

std::uint64_t trial_optimizer_seed(std::uint64_t master_seed, IdentificationMethod method, std::size_t w_index,
                                   std::size_t trial_index) {
  return hash64({master_seed, static_cast<std::uint64_t>(method), w_index, trial_index});
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// Non-finite diagnostics (a run that never produced a finite value) are
// written as null and read back as NaN.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double read_finite_or_nan(const Json& doc, const char* key) {
  const Json& v = doc.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

std::optional<double> read_optional_number(const Json& doc, const char* key) {
  const Json& v = doc.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

Json record_to_json(const TrialRecord& r) {
  return Json{{"version", kRecordFormatVersion},
              {"trial_id", r.trial_id},
              {"trial_index", r.trial_index},
              {"method", method_name(r.method)},
              {"w", r.w},
              {"seed", r.seed},
              {"opt_seed", r.opt_seed},
              {"converged", r.converged},
              {"f_min", optional_number(r.f_min)},
              {"final_objective", finite_or_null(r.final_objective)},
              {"completeness_residual", optional_number(r.completeness_residual)},
              {"grad_norm", finite_or_null(r.grad_norm)},
              {"evals", r.evals},
              {"local_runs", r.local_runs},
              {"wall_time", r.wall_time},
              {"physical", r.physical},
              {"error", r.error}};
}

TrialRecord record_from_json(const Json& doc) {
  require_version(doc, kRecordFormatVersion, "trial record");
  TrialRecord r;
  try {
    r.trial_id = doc.at("trial_id").get<std::string>();
    r.trial_index = doc.at("trial_index").get<std::size_t>();
    r.method = parse_method(doc.at("method").get<std::string>());
    r.w = doc.at("w").get<double>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.opt_seed = doc.at("opt_seed").get<std::uint64_t>();
    r.converged = doc.at("converged").get<bool>();
    r.f_min = read_optional_number(doc, "f_min");
    r.final_objective = read_finite_or_nan(doc, "final_objective");
    r.completeness_residual = read_optional_number(doc, "completeness_residual");
    r.grad_norm = read_finite_or_nan(doc, "grad_norm");
    r.evals = doc.at("evals").get<std::size_t>();
    r.local_runs = doc.at("local_runs").get<std::size_t>();
    r.wall_time = doc.at("wall_time").get<double>();
    r.physical = doc.at("physical").get<bool>();
    r.error = doc.at("error").get<std::string>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchema, std::string("trial record: ") + e.what());
  }
  if (r.f_min && !(*r.f_min >= 0.0 && *r.f_min <= 1.0)) fail(ErrorCode::kSchema, "trial record: f_min outside [0, 1]");
  return r;
}

}  // namespace qsid
