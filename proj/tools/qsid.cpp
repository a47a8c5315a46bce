#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsid/qsid.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

int report_failure(qsid_status status) {
  std::fprintf(stderr, "qsid: %s\n", qsid_last_error());
  return status == QSID_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
}

std::string format_fidelity(double f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", f);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

struct SeriesHandle {
  qsid_series* p = nullptr;
  ~SeriesHandle() { qsid_series_free(p); }
};

struct ModelHandle {
  qsid_model* p = nullptr;
  ~ModelHandle() { qsid_model_free(p); }
};

struct CString {
  char* p = nullptr;
  ~CString() { qsid_string_free(p); }
};

struct GenerateArgs {
  qsid_generate_options opts{};
  std::string out;
  std::string exact_out;
};

int run_generate(const GenerateArgs& a) {
  SeriesHandle exact;
  SeriesHandle noisy;
  if (auto st = qsid_series_generate(&a.opts, &exact.p, &noisy.p); st != QSID_OK) return report_failure(st);
  if (auto st = qsid_series_write(noisy.p, a.out.c_str()); st != QSID_OK) return report_failure(st);
  if (!a.exact_out.empty()) {
    if (auto st = qsid_series_write(exact.p, a.exact_out.c_str()); st != QSID_OK) return report_failure(st);
  }
  return 0;
}

struct IdentifyArgs {
  qsid_identify_options opts{};
  std::string method = "pade";
  std::string data;
  std::string out;
};

int run_identify(IdentifyArgs& a) {
  a.opts.method = a.method.c_str();
  SeriesHandle data;
  if (auto st = qsid_series_read(a.data.c_str(), &data.p); st != QSID_OK) return report_failure(st);
  ModelHandle model;
  if (auto st = qsid_identify(data.p, &a.opts, &model.p); st != QSID_OK) return report_failure(st);
  if (auto st = qsid_model_write(model.p, a.out.c_str()); st != QSID_OK) return report_failure(st);
  int converged = 0;
  double value = 0.0;
  double grad = 0.0;
  double residual = 0.0;
  qsid_model_info(model.p, &converged, &value, &grad, &residual);
  std::printf("method = %s\nconverged = %s\nobjective = %.6e\ngrad_norm = %.6e\n", a.method.c_str(),
              converged ? "true" : "false", value, grad);
  if (!std::isnan(residual)) std::printf("completeness_residual = %.6e\n", residual);
  return 0;
}

struct EvaluateArgs {
  std::string exact;
  std::string sid;
  std::string model;
  std::string initial;
};

int run_evaluate(const EvaluateArgs& a) {
  SeriesHandle exact;
  if (auto st = qsid_series_read(a.exact.c_str(), &exact.p); st != QSID_OK) return report_failure(st);
  SeriesHandle sid;
  if (!a.sid.empty()) {
    if (auto st = qsid_series_read(a.sid.c_str(), &sid.p); st != QSID_OK) return report_failure(st);
  } else {
    ModelHandle model;
    if (auto st = qsid_model_read(a.model.c_str(), &model.p); st != QSID_OK) return report_failure(st);
    SeriesHandle initial;
    const qsid_series* start = exact.p;
    if (!a.initial.empty()) {
      if (auto st = qsid_series_read(a.initial.c_str(), &initial.p); st != QSID_OK) return report_failure(st);
      start = initial.p;
    }
    if (auto st = qsid_model_repropagate(model.p, start, &sid.p); st != QSID_OK) return report_failure(st);
  }
  double f = 0.0;
  if (auto st = qsid_min_fidelity(exact.p, sid.p, &f); st != QSID_OK) return report_failure(st);
  std::printf("F_min = %s\n", format_fidelity(f).c_str());
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> workers;
};

int run_experiment(const ExperimentArgs& a) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) {
      std::fprintf(stderr, "qsid: cannot open '%s'\n", a.config.c_str());
      return kExitFailure;
    }
    try {
      cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::fprintf(stderr, "qsid: %s: %s\n", a.config.c_str(), e.what());
      return kExitFailure;
    }
  }
  if (a.seed) cfg["master_seed"] = *a.seed;
  if (a.trials) cfg["trials"] = *a.trials;
  if (a.workers) cfg["workers"] = *a.workers;
  CString csv;
  if (auto st = qsid_experiment_run(cfg.dump().c_str(), a.out.c_str(), &csv.p); st != QSID_OK) {
    return report_failure(st);
  }
  if (!a.csv.empty()) {
    std::ofstream out(a.csv, std::ios::binary);
    out << csv.p;
    if (!out) {
      std::fprintf(stderr, "qsid: cannot write '%s'\n", a.csv.c_str());
      return kExitFailure;
    }
  }
  std::fputs(csv.p, stdout);
  return 0;
}

struct ReportArgs {
  std::string records;
  std::string out;
};

int run_report(const ReportArgs& a) {
  CString csv;
  if (auto st = qsid_report(a.records.c_str(), a.out.c_str(), &csv.p); st != QSID_OK) return report_failure(st);
  std::fputs(csv.p, stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify open quantum system models from density-matrix time series"};
  app.require_subcommand(1);

  GenerateArgs gen;
  qsid_generate_options_default(&gen.opts);
  auto* generate = app.add_subcommand("generate", "Generate a (noisy) time series from a random Lindblad model");
  generate->add_option("--seed", gen.opts.seed, "Random seed")->required();
  generate->add_option("--n", gen.opts.n, "Hilbert-space dimension")->capture_default_str();
  generate->add_option("--jumps", gen.opts.num_jumps, "Number of jump operators")->capture_default_str();
  generate->add_option("--steps", gen.opts.steps, "Number of steps N (N + 1 states)")->capture_default_str();
  generate->add_option("--dt", gen.opts.dt, "Time step")->capture_default_str();
  generate->add_option("--gamma", gen.opts.jump_scale, "Jump-operator scale")->capture_default_str();
  generate->add_option("--noise", gen.opts.noise_weight, "Noise mixing weight w in [0, 1)")->capture_default_str();
  generate->add_option("-o,--out", gen.out, "Output series file")->required();
  generate->add_option("--exact-out", gen.exact_out, "Also write the noiseless series here");

  IdentifyArgs ident;
  qsid_identify_options_default(&ident.opts);
  auto* identify = app.add_subcommand("identify", "Identify a model from a time series");
  identify->add_option("--data", ident.data, "Input series file")->required();
  identify->add_option("--method", ident.method, "kraus, pade, trapezoid or simpson")
      ->check(CLI::IsMember({"kraus", "pade", "trapezoid", "simpson"}))
      ->capture_default_str();
  identify->add_option("--ops", ident.opts.num_ops, "Kraus or jump operator count (0: method default)");
  identify->add_option("--seed", ident.opts.seed, "Optimizer seed")->capture_default_str();
  identify->add_option("--hops", ident.opts.hops, "Basin-hopping hops")->capture_default_str();
  identify->add_option("--max-iter", ident.opts.max_iter, "BFGS iterations per local run")->capture_default_str();
  identify->add_option("--g-tol", ident.opts.g_tol, "Gradient-norm tolerance")->capture_default_str();
  identify->add_option("--step-size", ident.opts.step_size, "Hop perturbation half-width")->capture_default_str();
  identify->add_option("--temperature", ident.opts.temperature, "Metropolis temperature")->capture_default_str();
  identify->add_option("--penalty", ident.opts.penalty_weight, "Initial Kraus penalty weight")->capture_default_str();
  identify->add_option("-o,--out", ident.out, "Output model file")->required();

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Print the minimum fidelity between two trajectories");
  evaluate->add_option("--exact", eval.exact, "Reference series file")->required();
  auto* sid_opt = evaluate->add_option("--sid", eval.sid, "Identified series file");
  auto* model_opt = evaluate->add_option("--model", eval.model, "Identified model file (re-propagated)");
  evaluate->add_option("--initial", eval.initial, "Series whose first state seeds re-propagation")
      ->needs(model_opt);
  sid_opt->excludes(model_opt);

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte-Carlo identification sweep");
  experiment->add_option("--config", exp.config, "Experiment config (JSON)");
  experiment->add_option("--seed", exp.seed, "Master seed (overrides the config)");
  experiment->add_option("--trials", exp.trials, "Trials per cell (overrides the config)");
  experiment->add_option("--workers", exp.workers, "Worker threads (overrides the config)");
  experiment->add_option("-o,--out", exp.out, "Record stream output (JSON lines)")->required();
  experiment->add_option("--csv", exp.csv, "Also write the summary CSV here");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Aggregate a record stream into a CSV table");
  report->add_option("--records", rep.records, "Record stream (JSON lines)")->required();
  report->add_option("-o,--out", rep.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (generate->parsed()) return run_generate(gen);
  if (identify->parsed()) return run_identify(ident);
  if (evaluate->parsed()) {
    if (eval.sid.empty() && eval.model.empty()) {
      std::fprintf(stderr, "qsid: evaluate needs --sid or --model\n");
      return kExitUsage;
    }
    return run_evaluate(eval);
  }
  if (experiment->parsed()) return run_experiment(exp);
  if (report->parsed()) return run_report(rep);
  return kExitUsage;
}
