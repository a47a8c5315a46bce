#include "qsid/error.hpp"
#include "qsid/metrics.hpp"
#include "qsid/series_io.hpp"

namespace qsid {

namespace {

Json optimization_to_json(const OptimizationResult& r) {
  return Json{{"converged", r.converged},
              {"best_value", r.best_value},
              {"best_grad_norm", r.best_grad_norm},
              {"local_runs", r.local_runs},
              {"total_evals", r.total_evals},
              {"iterations", r.iterations},
              {"wall_time", r.wall_time},
              {"message", r.message},
              {"best_params", r.best_params}};
}

OptimizationResult optimization_from_json(const Json& j) {
  OptimizationResult r;
  r.converged = j.at("converged").get<bool>();
  r.best_value = j.at("best_value").get<double>();
  r.best_grad_norm = j.at("best_grad_norm").get<double>();
  r.local_runs = j.at("local_runs").get<std::size_t>();
  r.total_evals = j.at("total_evals").get<std::size_t>();
  r.iterations = j.value("iterations", std::size_t{0});
  r.wall_time = j.value("wall_time", 0.0);
  r.message = j.value("message", std::string());
  r.best_params = j.value("best_params", std::vector<double>{});
  return r;
}

}  // namespace

Json model_to_json(const IdentifiedModel& m) {
  Json doc{{"version", kModelFormatVersion}, {"kind", model_kind_name(m.method)}, {"n", m.dim()}};
  if (const auto* kraus = std::get_if<KrausSet>(&m.model)) {
    Json ops = Json::array();
    for (const auto& e : kraus->ops()) ops.push_back(matrix_to_json(e));
    doc["kraus"] = std::move(ops);
  } else {
    const auto& lind = std::get<LindbladModel>(m.model);
    doc["hamiltonian"] = matrix_to_json(lind.hamiltonian());
    Json jumps = Json::array();
    for (const auto& a : lind.jumps()) jumps.push_back(matrix_to_json(a));
    doc["jumps"] = std::move(jumps);
  }
  doc["completeness_residual"] = m.completeness_residual ? Json(*m.completeness_residual) : Json(nullptr);
  doc["penalty_weight"] = m.penalty_weight;
  doc["penalty_rounds"] = m.penalty_rounds;
  doc["optimization"] = optimization_to_json(m.optimization);
  return doc;
}

IdentifiedModel model_from_json(const Json& doc) {
  require_version(doc, kModelFormatVersion, "identified model");
  try {
    const IdentificationMethod method = parse_method(doc.at("kind").get<std::string>());
    IdentifiedModel m{method, KrausSet({ComplexMatrix::identity(1)}), {}, std::nullopt, 0.0, 0};
    if (method == IdentificationMethod::kKraus) {
      std::vector<ComplexMatrix> ops;
      for (const auto& e : doc.at("kraus")) ops.push_back(matrix_from_json(e));
      m.model = KrausSet(std::move(ops));
    } else {
      std::vector<ComplexMatrix> jumps;
      for (const auto& a : doc.at("jumps")) jumps.push_back(matrix_from_json(a));
      m.model = LindbladModel(matrix_from_json(doc.at("hamiltonian")), std::move(jumps));
    }
    if (m.dim() != doc.at("n").get<std::size_t>()) fail(ErrorCode::kSchema, "identified model: n mismatch");
    const Json& r = doc.at("completeness_residual");
    if (!r.is_null()) m.completeness_residual = r.get<double>();
    m.penalty_weight = doc.value("penalty_weight", 0.0);
    m.penalty_rounds = doc.value("penalty_rounds", std::size_t{0});
    m.optimization = optimization_from_json(doc.at("optimization"));
    return m;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchema, std::string("identified model: ") + e.what());
  }
}

void write_model(const std::string& path, const IdentifiedModel& m) {
  write_text_file(path, model_to_json(m).dump(2) + "\n");
}

IdentifiedModel read_model(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchema, "'" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace qsid
