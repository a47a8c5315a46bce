#include "qsid/qsid.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "qsid/error.hpp"
#include "qsid/harness.hpp"
#include "qsid/metrics.hpp"
#include "qsid/series_io.hpp"

struct qsid_series {
  qsid::TimeSeries series;
};

struct qsid_model {
  qsid::IdentifiedModel model;
};

namespace {

thread_local std::string last_error;

qsid_status to_status(qsid::ErrorCode code) {
  switch (code) {
    case qsid::ErrorCode::kInvalidArgument: return QSID_ERR_INVALID_ARGUMENT;
    case qsid::ErrorCode::kDimensionMismatch: return QSID_ERR_DIMENSION;
    case qsid::ErrorCode::kValidation: return QSID_ERR_VALIDATION;
    case qsid::ErrorCode::kNumerical: return QSID_ERR_NUMERICAL;
    case qsid::ErrorCode::kIo: return QSID_ERR_IO;
    case qsid::ErrorCode::kSchema: return QSID_ERR_SCHEMA;
  }
  return QSID_ERR_INTERNAL;
}

qsid_status set_error(qsid_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
qsid_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const qsid::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(QSID_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QSID_ERR_INTERNAL, e.what());
  }
}

qsid_status null_argument(const char* what) {
  return set_error(QSID_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qsid_last_error(void) { return last_error.c_str(); }

const char* qsid_version(void) { return "1.0.0"; }

void qsid_string_free(char* s) { std::free(s); }

void qsid_generate_options_default(qsid_generate_options* opts) {
  if (opts == nullptr) return;
  const qsid::GenerateOptions d;
  *opts = {d.n, d.num_jumps, d.steps, d.dt, d.jump_scale, d.noise_weight, d.seed};
}

qsid_status qsid_series_generate(const qsid_generate_options* opts, qsid_series** exact_out,
                                 qsid_series** noisy_out) {
  if (opts == nullptr) return null_argument("opts");
  return guarded([&] {
    qsid::GenerateOptions go;
    go.n = opts->n;
    go.num_jumps = opts->num_jumps;
    go.steps = opts->steps;
    go.dt = opts->dt;
    go.jump_scale = opts->jump_scale;
    go.noise_weight = opts->noise_weight;
    go.seed = opts->seed;
    qsid::GeneratedData data = qsid::generate_data(go);
    if (exact_out != nullptr) *exact_out = new qsid_series{std::move(data.exact)};
    if (noisy_out != nullptr) *noisy_out = new qsid_series{std::move(data.noisy)};
    return QSID_OK;
  });
}

qsid_status qsid_series_read(const char* path, qsid_series** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new qsid_series{qsid::read_series(path)};
    return QSID_OK;
  });
}

qsid_status qsid_series_write(const qsid_series* s, const char* path) {
  if (s == nullptr) return null_argument("series");
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    qsid::write_series(path, s->series);
    return QSID_OK;
  });
}

void qsid_series_free(qsid_series* s) { delete s; }

qsid_status qsid_series_info(const qsid_series* s, size_t* dim, size_t* steps, double* dt) {
  if (s == nullptr) return null_argument("series");
  if (dim != nullptr) *dim = s->series.dim();
  if (steps != nullptr) *steps = s->series.steps();
  if (dt != nullptr) *dt = s->series.dt();
  return QSID_OK;
}

qsid_status qsid_series_state(const qsid_series* s, size_t index, double* out, size_t out_len) {
  if (s == nullptr) return null_argument("series");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    if (index >= s->series.states().size()) {
      return set_error(QSID_ERR_INVALID_ARGUMENT, "state index out of range");
    }
    const auto& m = s->series[index].matrix();
    if (out_len < 2 * m.size()) return set_error(QSID_ERR_INVALID_ARGUMENT, "output buffer too small");
    for (std::size_t i = 0; i < m.size(); ++i) {
      out[2 * i] = m.entries()[i].real();
      out[2 * i + 1] = m.entries()[i].imag();
    }
    return QSID_OK;
  });
}

qsid_status qsid_min_fidelity(const qsid_series* exact, const qsid_series* sid, double* out) {
  if (exact == nullptr || sid == nullptr) return null_argument("series");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = qsid::min_fidelity(exact->series, sid->series);
    return QSID_OK;
  });
}

void qsid_identify_options_default(qsid_identify_options* opts) {
  if (opts == nullptr) return;
  const qsid::IdentifyConfig d;
  *opts = {"pade",
           0,
           d.optimizer.g_tol,
           d.optimizer.max_iter,
           d.optimizer.hops,
           d.optimizer.step_size,
           d.optimizer.temperature,
           d.optimizer.seed,
           d.penalty_weight,
           d.completeness_target,
           d.max_penalty_rounds};
}

qsid_status qsid_identify(const qsid_series* data, const qsid_identify_options* opts, qsid_model** out) {
  if (data == nullptr) return null_argument("data");
  if (opts == nullptr) return null_argument("opts");
  if (out == nullptr) return null_argument("out");
  if (opts->method == nullptr) return null_argument("opts->method");
  return guarded([&] {
    const qsid::IdentificationMethod method = qsid::parse_method(opts->method);
    qsid::IdentifyConfig cfg;
    cfg.optimizer.g_tol = opts->g_tol;
    cfg.optimizer.max_iter = opts->max_iter;
    cfg.optimizer.hops = opts->hops;
    cfg.optimizer.step_size = opts->step_size;
    cfg.optimizer.temperature = opts->temperature;
    cfg.optimizer.seed = opts->seed;
    cfg.penalty_weight = opts->penalty_weight;
    cfg.completeness_target = opts->completeness_target;
    cfg.max_penalty_rounds = opts->max_penalty_rounds;
    std::size_t ops = opts->num_ops;
    if (ops == 0) ops = method == qsid::IdentificationMethod::kKraus ? 4 : 1;
    *out = new qsid_model{qsid::identify(data->series, method, ops, cfg)};
    return QSID_OK;
  });
}

qsid_status qsid_model_read(const char* path, qsid_model** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new qsid_model{qsid::read_model(path)};
    return QSID_OK;
  });
}

qsid_status qsid_model_write(const qsid_model* m, const char* path) {
  if (m == nullptr) return null_argument("model");
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    qsid::write_model(path, m->model);
    return QSID_OK;
  });
}

void qsid_model_free(qsid_model* m) { delete m; }

qsid_status qsid_model_info(const qsid_model* m, int* converged, double* best_value, double* grad_norm,
                            double* completeness_residual) {
  if (m == nullptr) return null_argument("model");
  if (converged != nullptr) *converged = m->model.converged() ? 1 : 0;
  if (best_value != nullptr) *best_value = m->model.optimization.best_value;
  if (grad_norm != nullptr) *grad_norm = m->model.optimization.best_grad_norm;
  if (completeness_residual != nullptr) {
    *completeness_residual = m->model.completeness_residual.value_or(std::numeric_limits<double>::quiet_NaN());
  }
  return QSID_OK;
}

qsid_status qsid_model_to_json(const qsid_model* m, char** out) {
  if (m == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = copy_string(qsid::model_to_json(m->model).dump(2));
    return QSID_OK;
  });
}

qsid_status qsid_model_repropagate(const qsid_model* m, const qsid_series* initial, qsid_series** out) {
  if (m == nullptr) return null_argument("model");
  if (initial == nullptr) return null_argument("initial");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const qsid::TimeSeries& s = initial->series;
    qsid::Repropagation rp = qsid::repropagate(m->model, s[0], s.dt(), s.steps());
    if (!rp.series) return set_error(QSID_ERR_NUMERICAL, "non-physical identified model: " + rp.diagnostic);
    *out = new qsid_series{std::move(*rp.series)};
    return QSID_OK;
  });
}

qsid_status qsid_experiment_run(const char* config_json, const char* records_path, char** summary_csv_out) {
  if (config_json == nullptr) return null_argument("config_json");
  if (records_path == nullptr) return null_argument("records_path");
  return guarded([&] {
    qsid::Json doc;
    try {
      doc = qsid::Json::parse(config_json);
    } catch (const qsid::Json::exception& e) {
      return set_error(QSID_ERR_SCHEMA, std::string("experiment config: ") + e.what());
    }
    const qsid::ExperimentConfig cfg = qsid::config_from_json(doc);
    const qsid::ExperimentSummary summary = qsid::run_experiment(cfg, records_path);
    if (summary_csv_out != nullptr) *summary_csv_out = copy_string(qsid::summary_csv(summary.cells));
    return QSID_OK;
  });
}

qsid_status qsid_report(const char* records_path, const char* csv_path, char** summary_csv_out) {
  if (records_path == nullptr) return null_argument("records_path");
  if (csv_path == nullptr) return null_argument("csv_path");
  return guarded([&] {
    const auto cells = qsid::report(records_path, csv_path);
    if (summary_csv_out != nullptr) *summary_csv_out = copy_string(qsid::summary_csv(cells));
    return QSID_OK;
  });
}

}  // extern "C"
