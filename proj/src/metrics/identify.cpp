#include <chrono>
#include <cmath>

#include "qsid/error.hpp"
#include "qsid/linalg.hpp"
#include "qsid/metrics.hpp"
#include "qsid/objectives.hpp"
#include "qsid/seed.hpp"

namespace qsid {

std::string_view method_name(IdentificationMethod m) {
  switch (m) {
    case IdentificationMethod::kKraus: return "kraus";
    case IdentificationMethod::kPade: return "pade";
    case IdentificationMethod::kTrapezoid: return "trapezoid";
    case IdentificationMethod::kSimpson: return "simpson";
  }
  return "unknown";
}

std::string_view model_kind_name(IdentificationMethod m) {
  switch (m) {
    case IdentificationMethod::kKraus: return "kraus";
    case IdentificationMethod::kPade: return "lindblad-pade";
    case IdentificationMethod::kTrapezoid: return "lindblad-trapezoid";
    case IdentificationMethod::kSimpson: return "lindblad-simpson";
  }
  return "unknown";
}

IdentificationMethod parse_method(std::string_view name) {
  for (auto m : {IdentificationMethod::kKraus, IdentificationMethod::kPade, IdentificationMethod::kTrapezoid,
                 IdentificationMethod::kSimpson}) {
    if (name == method_name(m) || name == model_kind_name(m)) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown identification method '" + std::string(name) + "'");
}

std::size_t IdentifiedModel::dim() const {
  return std::visit([](const auto& mdl) { return mdl.dim(); }, model);
}

std::vector<double> initial_parameters(IdentificationMethod method, std::size_t n, std::size_t num_ops,
                                       std::uint64_t seed) {
  Rng rng(hash64({seed, kInitStream}));
  std::normal_distribution<double> normal(0.0, 1.0);
  if (method == IdentificationMethod::kKraus) {
    const ParameterLayout layout = ParameterLayout::kraus(n, num_ops);
    std::vector<double> x(layout.dimension());
    for (auto& v : x) v = 0.01 * normal(rng);
    for (std::size_t i = 0; i < n; ++i) x[i * n + i] += 1.0;  // Re part of E_1 diagonal
    return x;
  }
  const ParameterLayout layout = ParameterLayout::lindblad(n, num_ops);
  std::vector<double> x(layout.dimension());
  for (auto& v : x) v = 0.1 * normal(rng);
  return x;
}

namespace {

ObjectiveFunction lindblad_objective_for(IdentificationMethod method, const TimeSeries& data, std::size_t num_ops) {
  switch (method) {
    case IdentificationMethod::kPade: return pade_objective(data, num_ops);
    case IdentificationMethod::kTrapezoid: return integral_objective(data, num_ops, QuadratureRule::kTrapezoid);
    case IdentificationMethod::kSimpson: return integral_objective(data, num_ops, QuadratureRule::kSimpson);
    case IdentificationMethod::kKraus: break;
  }
  fail(ErrorCode::kInvalidArgument, "not a Lindblad method");
}

}  // namespace

IdentifiedModel identify(const TimeSeries& data, IdentificationMethod method, std::size_t num_ops,
                         const IdentifyConfig& cfg) {
  cfg.optimizer.validate();
  if (method == IdentificationMethod::kSimpson && data.steps() < 2) {
    fail(ErrorCode::kInvalidArgument, "identify: Simpson's rule needs at least 3 states");
  }
  const std::size_t n = data.dim();
  std::vector<double> x = initial_parameters(method, n, num_ops, cfg.optimizer.seed);

  if (method != IdentificationMethod::kKraus) {
    const ObjectiveFunction f = lindblad_objective_for(method, data, num_ops);
    OptimizationResult res = basin_hopping(f, x, cfg.optimizer);
    LindbladModel model = f.layout()->decode_lindblad(res.best_params);
    return {method, std::move(model), std::move(res), std::nullopt, 0.0, 0};
  }

  if (!(cfg.penalty_weight > 0.0)) fail(ErrorCode::kInvalidArgument, "identify: penalty weight must be positive");
  if (cfg.max_penalty_rounds < 1) fail(ErrorCode::kInvalidArgument, "identify: at least one penalty round required");
  const ParameterLayout layout = ParameterLayout::kraus(n, num_ops);
  double mu = cfg.penalty_weight;
  OptimizationResult res;
  std::size_t evals = 0;
  std::size_t local_runs = 0;
  std::size_t iterations = 0;
  double wall = 0.0;
  double residual = 0.0;
  std::size_t round = 0;
  for (; round < cfg.max_penalty_rounds; ++round) {
    if (round > 0) mu *= 10.0;
    const ObjectiveFunction f = kraus_objective(data, num_ops, mu);
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = hash64({cfg.optimizer.seed, round});
    res = basin_hopping(f, x, oc);
    evals += res.total_evals;
    local_runs += res.local_runs;
    iterations += res.iterations;
    wall += res.wall_time;
    x = res.best_params;
    residual = layout.decode_kraus(x).completeness_residual();
    if (residual <= cfg.completeness_target) {
      ++round;
      break;
    }
  }
  res.total_evals = evals;
  res.local_runs = local_runs;
  res.iterations = iterations;
  res.wall_time = wall;
  KrausSet kraus = layout.decode_kraus(res.best_params);
  return {method, std::move(kraus), std::move(res), residual, mu, round};
}

Repropagation repropagate(const IdentifiedModel& m, const DensityMatrix& rho0, double dt, std::size_t steps) {
  if (rho0.dim() != m.dim()) fail(ErrorCode::kDimensionMismatch, "repropagate: state dimension mismatch");
  std::vector<ComplexMatrix> raw;
  if (const auto* kraus = std::get_if<KrausSet>(&m.model)) {
    raw = propagate_kraus_raw(*kraus, rho0.matrix(), steps);
  } else {
    raw = propagate_lindblad_raw(std::get<LindbladModel>(m.model), rho0.matrix(), dt, steps);
  }

  Repropagation out;
  std::vector<DensityMatrix> states;
  states.reserve(raw.size());
  states.push_back(rho0);
  const std::size_t n = rho0.dim();
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!raw[i].all_finite()) {
      out.physical = false;
      out.diagnostic = "non-finite state at step " + std::to_string(i);
      return out;
    }
    const ComplexMatrix h = hermitian_part(raw[i]);
    const double tr = trace(h).real();
    out.max_trace_deviation = std::max(out.max_trace_deviation, std::abs(tr - 1.0));
    HermitianEigen eig = eigh(h);
    const double scale = std::max(tr, 0.0);
    if (!(tr > 0.0) || eig.values.front() < -kRepropagationPsdTol * std::max(1.0, scale)) {
      out.physical = false;
      out.diagnostic = "state " + std::to_string(i) + " has eigenvalue " + std::to_string(eig.values.front()) +
                       " (trace " + std::to_string(tr) + ")";
      return out;
    }
    ComplexMatrix fixed = h;
    if (eig.values.front() < 0.0) {
      out.max_eigen_clamp = std::max(out.max_eigen_clamp, -eig.values.front());
      ComplexMatrix scaled = eig.vectors;
      for (std::size_t k = 0; k < n; ++k) {
        const double lambda = std::max(0.0, eig.values[k]);
        for (std::size_t r = 0; r < n; ++r) scaled(r, k) *= lambda;
      }
      gemm(1.0, scaled, Op::kNone, eig.vectors, Op::kAdjoint, 0.0, fixed);
      fixed = hermitian_part(fixed);
    }
    fixed *= 1.0 / trace(fixed).real();
    states.emplace_back(std::move(fixed), 1e-8);
  }
  out.series.emplace(dt, std::move(states), SeriesMetadata{0, std::string(model_kind_name(m.method)), 0.0});
  return out;
}

}  // namespace qsid
