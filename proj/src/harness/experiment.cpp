#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "qsid/error.hpp"
#include "qsid/harness.hpp"

namespace qsid {

namespace {

std::size_t resolve_workers(std::size_t configured) {
  std::size_t workers = configured;
  if (const char* env = std::getenv("QSID_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') fail(ErrorCode::kInvalidArgument, "QSID_WORKERS must be a non-negative integer");
    workers = static_cast<std::size_t>(v);
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return workers;
}

struct Task {
  IdentificationMethod method;
  std::size_t w_index;
  std::size_t trial_index;
};

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, IdentificationMethod method, std::size_t w_index,
                      std::size_t trial_index) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial_id = std::string(method_name(method)) + ":" + std::to_string(w_index) + ":" + std::to_string(trial_index);
  rec.trial_index = trial_index;
  rec.method = method;
  rec.w = cfg.noise_grid.at(w_index);
  rec.seed = trial_data_seed(cfg.master_seed, trial_index);
  rec.opt_seed = trial_optimizer_seed(cfg.master_seed, method, w_index, trial_index);
  try {
    GenerateOptions go;
    go.n = cfg.n;
    go.num_jumps = cfg.num_jumps_true;
    go.steps = cfg.steps;
    go.dt = cfg.dt;
    go.jump_scale = cfg.jump_scale;
    go.noise_weight = rec.w;
    go.seed = rec.seed;
    const GeneratedData data = generate_data(go);

    IdentifyConfig icfg;
    icfg.optimizer = cfg.optimizer;
    icfg.optimizer.seed = rec.opt_seed;
    icfg.penalty_weight = cfg.penalty_weight;
    icfg.completeness_target = cfg.completeness_target;
    icfg.max_penalty_rounds = cfg.max_penalty_rounds;
    const std::size_t ops = method == IdentificationMethod::kKraus ? cfg.num_kraus_ops : cfg.num_jumps_fit;
    const IdentifiedModel model = identify(data.noisy, method, ops, icfg);

    rec.converged = model.converged();
    rec.final_objective = model.optimization.best_value;
    rec.completeness_residual = model.completeness_residual;
    rec.grad_norm = model.optimization.best_grad_norm;
    rec.evals = model.optimization.total_evals;
    rec.local_runs = model.optimization.local_runs;

    const Repropagation rp = repropagate(model, data.noisy[0], data.noisy.dt(), data.noisy.steps());
    rec.physical = rp.physical;
    if (rp.series) {
      rec.f_min = min_fidelity(data.exact, *rp.series);
    } else {
      rec.error = "non-physical identified model: " + rp.diagnostic;
    }
  } catch (const std::exception& e) {
    rec.converged = false;
    rec.f_min.reset();
    rec.error = e.what();
  }
  if (cfg.record_timing) {
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_path) {
  cfg.validate();
  std::vector<Task> tasks;
  for (auto m : cfg.methods)
    for (std::size_t wi = 0; wi < cfg.noise_grid.size(); ++wi)
      for (std::size_t t = 0; t < cfg.trials; ++t) tasks.push_back({m, wi, t});

  std::ofstream out(out_path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + out_path + "' for writing");

  const std::size_t workers = std::min(resolve_workers(cfg.workers), tasks.size());
  std::atomic<std::size_t> next_task{0};
  std::mutex mu;
  std::map<std::size_t, TrialRecord> pending;  // finished but not yet committed
  std::size_t next_commit = 0;
  std::vector<TrialRecord> committed;
  committed.reserve(tasks.size());
  bool io_failed = false;

  // Records are committed strictly in task order, so the stream does not
  // depend on thread scheduling.
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next_task.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      TrialRecord rec = run_trial(cfg, task.method, task.w_index, task.trial_index);
      std::lock_guard<std::mutex> lock(mu);
      pending.emplace(idx, std::move(rec));
      while (!pending.empty() && pending.begin()->first == next_commit) {
        TrialRecord& ready = pending.begin()->second;
        out << record_to_json(ready).dump() << '\n';
        out.flush();
        if (!out) io_failed = true;
        committed.push_back(std::move(ready));
        pending.erase(pending.begin());
        ++next_commit;
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (io_failed) fail(ErrorCode::kIo, "failed writing records to '" + out_path + "'");

  ExperimentSummary summary;
  summary.records = committed.size();
  for (const auto& r : committed)
    if (!r.error.empty()) ++summary.failed_trials;
  summary.cells = summarize(committed);
  return summary;
}

}  // namespace qsid
