#include "qsid/objectives.hpp"

#include <memory>
#include <string>

#include "qsid/error.hpp"

namespace qsid {

ObjectiveFunction::ObjectiveFunction(std::size_t dimension, Evaluator evaluator, ObjectiveDescriptor descriptor,
                                     std::optional<ParameterLayout> layout)
    : dimension_(dimension),
      evaluator_(std::move(evaluator)),
      descriptor_(std::move(descriptor)),
      layout_(std::move(layout)) {
  if (!evaluator_) fail(ErrorCode::kInvalidArgument, "ObjectiveFunction: empty evaluator");
  if (layout_ && layout_->dimension() != dimension_) {
    fail(ErrorCode::kDimensionMismatch, "ObjectiveFunction: layout dimension mismatch");
  }
}

double ObjectiveFunction::operator()(std::span<const double> x, std::span<double> grad) const {
  if (x.size() != dimension_ || (!grad.empty() && grad.size() != dimension_)) {
    fail(ErrorCode::kDimensionMismatch, "ObjectiveFunction: expected " + std::to_string(dimension_) + " parameters");
  }
  return evaluator_(x, grad);
}

namespace {

std::vector<ComplexMatrix> state_matrices(const TimeSeries& data) {
  std::vector<ComplexMatrix> out;
  out.reserve(data.states().size());
  for (const auto& s : data.states()) out.push_back(s.matrix());
  return out;
}

// Residual terms of the form R_i = B_i - c L[X_i]; both Lindblad objectives
// reduce to this with different (B_i, X_i, c).
struct LinearResidualData {
  std::vector<ComplexMatrix> targets;    // B_i
  std::vector<ComplexMatrix> arguments;  // X_i, Hermitian
  double scale = 1.0;                    // c
};

double kraus_evaluate(const std::vector<ComplexMatrix>& states, const ParameterLayout& layout, double mu,
                      std::span<const double> x, std::span<double> grad) {
  const std::size_t n = layout.n();
  const std::size_t num_ops = layout.num_ops();
  const bool want_grad = !grad.empty();

  std::vector<ComplexMatrix> ops(num_ops, ComplexMatrix(n, n));
  for (std::size_t k = 0; k < num_ops; ++k) layout.unpack_operator(x, k, ops[k]);
  std::vector<ComplexMatrix> e_rho(num_ops, ComplexMatrix(n, n));
  std::vector<ComplexMatrix> g(want_grad ? num_ops : 0, ComplexMatrix(n, n));
  ComplexMatrix residual(n, n);

  double value = 0.0;
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    residual = states[i + 1];
    residual *= -1.0;
    for (std::size_t k = 0; k < num_ops; ++k) {
      gemm(1.0, ops[k], Op::kNone, states[i], Op::kNone, 0.0, e_rho[k]);
      gemm(1.0, e_rho[k], Op::kNone, ops[k], Op::kAdjoint, 1.0, residual);
    }
    value += frobenius_norm_squared(residual);
    if (want_grad) {
      // d/dE_k of ||R||^2 is 4 R E_k rho_i (R and rho_i Hermitian).
      for (std::size_t k = 0; k < num_ops; ++k) gemm(4.0, residual, Op::kNone, e_rho[k], Op::kNone, 1.0, g[k]);
    }
  }

  ComplexMatrix completeness = ComplexMatrix::identity(n);
  completeness *= -1.0;
  for (const auto& e : ops) gemm(1.0, e, Op::kAdjoint, e, Op::kNone, 1.0, completeness);
  value += mu * frobenius_norm_squared(completeness);

  if (want_grad) {
    for (std::size_t k = 0; k < num_ops; ++k) {
      gemm(4.0 * mu, ops[k], Op::kNone, completeness, Op::kNone, 1.0, g[k]);
      layout.pack_operator_gradient(g[k], k, grad);
    }
  }
  return value;
}

double linear_residual_evaluate(const LinearResidualData& data, const ParameterLayout& layout,
                                std::span<const double> x, std::span<double> grad) {
  const std::size_t n = layout.n();
  const std::size_t num_jumps = layout.num_ops();
  const bool want_grad = !grad.empty();
  const Complex i_unit(0.0, 1.0);
  const double c = data.scale;

  ComplexMatrix h(n, n);
  layout.unpack_hamiltonian(x, h);
  std::vector<ComplexMatrix> jumps(num_jumps, ComplexMatrix(n, n));
  std::vector<ComplexMatrix> ada(num_jumps, ComplexMatrix(n, n));
  for (std::size_t j = 0; j < num_jumps; ++j) {
    layout.unpack_operator(x, j, jumps[j]);
    gemm(1.0, jumps[j], Op::kAdjoint, jumps[j], Op::kNone, 0.0, ada[j]);
  }

  ComplexMatrix residual(n, n);
  ComplexMatrix tmp(n, n);
  ComplexMatrix tmp2(n, n);
  ComplexMatrix g_h(n, n);
  std::vector<ComplexMatrix> g_a(want_grad ? num_jumps : 0, ComplexMatrix(n, n));

  double value = 0.0;
  for (std::size_t i = 0; i < data.targets.size(); ++i) {
    const ComplexMatrix& xi = data.arguments[i];
    // residual = B - c L[X]
    residual = data.targets[i];
    gemm(-c * i_unit, h, Op::kNone, xi, Op::kNone, 1.0, residual);
    gemm(c * i_unit, xi, Op::kNone, h, Op::kNone, 1.0, residual);
    for (std::size_t j = 0; j < num_jumps; ++j) {
      gemm(1.0, jumps[j], Op::kNone, xi, Op::kNone, 0.0, tmp);
      gemm(-2.0 * c, tmp, Op::kNone, jumps[j], Op::kAdjoint, 1.0, residual);
      gemm(c, ada[j], Op::kNone, xi, Op::kNone, 1.0, residual);
      gemm(c, xi, Op::kNone, ada[j], Op::kNone, 1.0, residual);
    }
    value += frobenius_norm_squared(residual);
    if (!want_grad) continue;

    // dF/dH = -2c i [X, R]
    gemm(-2.0 * c * i_unit, xi, Op::kNone, residual, Op::kNone, 1.0, g_h);
    gemm(2.0 * c * i_unit, residual, Op::kNone, xi, Op::kNone, 1.0, g_h);
    // dF/dA = -2c (4 R A X - 2 A X R - 2 A R X)
    gemm(1.0, residual, Op::kNone, xi, Op::kNone, 0.0, tmp);  // R X
    gemm(1.0, xi, Op::kNone, residual, Op::kNone, 0.0, tmp2);  // X R
    tmp += tmp2;                                               // R X + X R
    for (std::size_t j = 0; j < num_jumps; ++j) {
      gemm(1.0, residual, Op::kNone, jumps[j], Op::kNone, 0.0, tmp2);  // R A
      gemm(-8.0 * c, tmp2, Op::kNone, xi, Op::kNone, 1.0, g_a[j]);
      gemm(4.0 * c, jumps[j], Op::kNone, tmp, Op::kNone, 1.0, g_a[j]);
    }
  }
  if (want_grad) {
    layout.pack_hamiltonian_gradient(g_h, grad);
    for (std::size_t j = 0; j < num_jumps; ++j) layout.pack_operator_gradient(g_a[j], j, grad);
  }
  return value;
}

ObjectiveFunction make_linear_residual_objective(LinearResidualData data, const TimeSeries& series,
                                                 std::size_t num_jumps, std::string method) {
  const ParameterLayout layout = ParameterLayout::lindblad(series.dim(), num_jumps);
  auto shared = std::make_shared<const LinearResidualData>(std::move(data));
  ObjectiveDescriptor desc{std::move(method), series.steps(), series.dim(), num_jumps, std::nullopt};
  return ObjectiveFunction(
      layout.dimension(),
      [shared, layout](std::span<const double> x, std::span<double> grad) {
        return linear_residual_evaluate(*shared, layout, x, grad);
      },
      std::move(desc), layout);
}

}  // namespace

ObjectiveFunction kraus_objective(const TimeSeries& data, std::size_t num_ops, double penalty_weight) {
  if (num_ops < 1) fail(ErrorCode::kInvalidArgument, "kraus_objective: at least one Kraus operator required");
  if (!(penalty_weight > 0.0)) fail(ErrorCode::kInvalidArgument, "kraus_objective: penalty weight must be positive");
  const ParameterLayout layout = ParameterLayout::kraus(data.dim(), num_ops);
  auto states = std::make_shared<const std::vector<ComplexMatrix>>(state_matrices(data));
  ObjectiveDescriptor desc{"kraus", data.steps(), data.dim(), num_ops, penalty_weight};
  return ObjectiveFunction(
      layout.dimension(),
      [states, layout, penalty_weight](std::span<const double> x, std::span<double> grad) {
        return kraus_evaluate(*states, layout, penalty_weight, x, grad);
      },
      std::move(desc), layout);
}

ObjectiveFunction kraus_single_step_objective(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                              std::size_t num_ops, double penalty_weight) {
  ObjectiveFunction f = kraus_objective(TimeSeries(1.0, {rho0, rho1}), num_ops, penalty_weight);
  ObjectiveDescriptor desc = f.descriptor();
  desc.method = "kraus-single-step";
  return ObjectiveFunction(f.dimension(), [f](std::span<const double> x, std::span<double> g) { return f(x, g); },
                           std::move(desc), f.layout());
}

ObjectiveFunction pade_objective(const TimeSeries& data, std::size_t num_jumps) {
  LinearResidualData d;
  d.scale = data.dt();
  for (std::size_t i = 1; i <= data.steps(); ++i) {
    const ComplexMatrix& cur = data[i].matrix();
    const ComplexMatrix& prev = data[i - 1].matrix();
    d.targets.push_back(cur - prev);
    ComplexMatrix mid = cur + prev;
    mid *= 0.5;
    d.arguments.push_back(std::move(mid));
  }
  return make_linear_residual_objective(std::move(d), data, num_jumps, "pade");
}

std::vector<ComplexMatrix> cumulative_integral(const TimeSeries& data, QuadratureRule rule) {
  const std::size_t steps = data.steps();
  if (rule == QuadratureRule::kSimpson && steps < 2) {
    fail(ErrorCode::kInvalidArgument, "cumulative_integral: Simpson's rule needs at least 3 states");
  }
  const double dt = data.dt();
  const std::size_t n = data.dim();
  std::vector<ComplexMatrix> out(steps + 1, ComplexMatrix(n, n));
  auto rho = [&](std::size_t i) -> const ComplexMatrix& { return data[i].matrix(); };

  if (rule == QuadratureRule::kTrapezoid) {
    for (std::size_t i = 1; i <= steps; ++i) {
      out[i] = out[i - 1];
      out[i].add_scaled(0.5 * dt, rho(i - 1));
      out[i].add_scaled(0.5 * dt, rho(i));
    }
    return out;
  }

  // Even prefixes: composite Simpson. Odd prefixes: the preceding even prefix
  // plus a trapezoid on the final interval.
  for (std::size_t i = 1; i <= steps; ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2];
      out[i].add_scaled(dt / 3.0, rho(i - 2));
      out[i].add_scaled(4.0 * dt / 3.0, rho(i - 1));
      out[i].add_scaled(dt / 3.0, rho(i));
    } else {
      out[i] = out[i - 1];
      out[i].add_scaled(0.5 * dt, rho(i - 1));
      out[i].add_scaled(0.5 * dt, rho(i));
    }
  }
  return out;
}

ObjectiveFunction integral_objective(const TimeSeries& data, std::size_t num_jumps, QuadratureRule rule) {
  std::vector<ComplexMatrix> integrals = cumulative_integral(data, rule);
  LinearResidualData d;
  d.scale = 1.0;
  for (std::size_t i = 1; i <= data.steps(); ++i) {
    d.targets.push_back(data[i].matrix() - data[0].matrix());
    d.arguments.push_back(hermitian_part(integrals[i]));
  }
  return make_linear_residual_objective(std::move(d), data, num_jumps,
                                        rule == QuadratureRule::kSimpson ? "simpson" : "trapezoid");
}

}  // namespace qsid
