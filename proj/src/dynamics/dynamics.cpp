#include "qsid/dynamics.hpp"

#include <cmath>
#include <string>

#include "qsid/error.hpp"
#include "qsid/linalg.hpp"
#include "qsid/seed.hpp"

namespace qsid {

namespace {

void require_dim(const ComplexMatrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + ": expected " + std::to_string(n) + "x" +
                                            std::to_string(n) + " operator");
  }
}

}  // namespace

LindbladModel::LindbladModel(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> jumps)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  if (!hamiltonian_.is_square() || hamiltonian_.empty()) {
    fail(ErrorCode::kDimensionMismatch, "LindbladModel: Hamiltonian must be square");
  }
  const double herm = frobenius_norm(hamiltonian_ - dagger(hamiltonian_));
  if (herm > 1e-12 * std::max(1.0, frobenius_norm(hamiltonian_))) {
    fail(ErrorCode::kValidation, "LindbladModel: Hamiltonian is not Hermitian");
  }
  for (const auto& a : jumps_) require_dim(a, dim(), "LindbladModel");
}

LindbladModel LindbladModel::zero(std::size_t n, std::size_t num_jumps) {
  return {ComplexMatrix(n, n), std::vector<ComplexMatrix>(num_jumps, ComplexMatrix(n, n))};
}

KrausSet::KrausSet(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) fail(ErrorCode::kInvalidArgument, "KrausSet: at least one operator required");
  const std::size_t n = ops_.front().rows();
  ComplexMatrix sum(n, n);
  for (const auto& e : ops_) {
    require_dim(e, n, "KrausSet");
    gemm(1.0, e, Op::kAdjoint, e, Op::kNone, 1.0, sum);
  }
  residual_ = frobenius_norm(sum - ComplexMatrix::identity(n));
}

TimeSeries::TimeSeries(double dt, std::vector<DensityMatrix> states, SeriesMetadata meta)
    : dt_(dt), states_(std::move(states)), meta_(std::move(meta)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) fail(ErrorCode::kInvalidArgument, "TimeSeries: dt must be positive");
  if (states_.size() < 2) fail(ErrorCode::kInvalidArgument, "TimeSeries: at least two states required");
  for (const auto& s : states_) {
    if (s.dim() != dim()) fail(ErrorCode::kDimensionMismatch, "TimeSeries: states differ in dimension");
  }
}

ComplexMatrix random_ginibre(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(n, n);
  for (auto& z : g.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = {re, im};
  }
  return g;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "random_hermitian: n must be positive");
  const ComplexMatrix g = random_ginibre(n, rng);
  return hermitian_part(g);
}

DensityMatrix random_density_matrix(std::size_t n, Rng& rng) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "random_density_matrix: n must be positive");
  const ComplexMatrix g = random_ginibre(n, rng);
  ComplexMatrix rho(n, n);
  gemm(1.0, g, Op::kNone, g, Op::kAdjoint, 0.0, rho);
  rho = hermitian_part(rho);
  rho *= 1.0 / trace(rho).real();
  return DensityMatrix(std::move(rho), 1e-12);
}

ComplexMatrix random_jump_operator(std::size_t n, Rng& rng, double scale) {
  if (!(scale >= 0.0)) fail(ErrorCode::kInvalidArgument, "random_jump_operator: scale must be non-negative");
  ComplexMatrix a = random_ginibre(n, rng);
  a *= std::sqrt(scale);
  return a;
}

LindbladModel random_lindblad_model(std::size_t n, std::size_t num_jumps, Rng& rng, double jump_scale) {
  ComplexMatrix h = random_hermitian(n, rng);
  std::vector<ComplexMatrix> jumps;
  jumps.reserve(num_jumps);
  for (std::size_t j = 0; j < num_jumps; ++j) jumps.push_back(random_jump_operator(n, rng, jump_scale));
  return {std::move(h), std::move(jumps)};
}

ComplexMatrix lindbladian_apply(const LindbladModel& model, const ComplexMatrix& rho) {
  const std::size_t n = model.dim();
  require_dim(rho, n, "lindbladian_apply");
  const Complex i_unit(0.0, 1.0);
  ComplexMatrix out(n, n);
  gemm(i_unit, model.hamiltonian(), Op::kNone, rho, Op::kNone, 0.0, out);
  gemm(-i_unit, rho, Op::kNone, model.hamiltonian(), Op::kNone, 1.0, out);
  ComplexMatrix a_rho(n, n);
  ComplexMatrix ada(n, n);
  for (const auto& a : model.jumps()) {
    gemm(1.0, a, Op::kNone, rho, Op::kNone, 0.0, a_rho);
    gemm(2.0, a_rho, Op::kNone, a, Op::kAdjoint, 1.0, out);
    gemm(1.0, a, Op::kAdjoint, a, Op::kNone, 0.0, ada);
    gemm(-1.0, ada, Op::kNone, rho, Op::kNone, 1.0, out);
    gemm(-1.0, rho, Op::kNone, ada, Op::kNone, 1.0, out);
  }
  return out;
}

ComplexMatrix lindbladian_superoperator(const LindbladModel& model) {
  const std::size_t n = model.dim();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const Complex i_unit(0.0, 1.0);
  ComplexMatrix s = i_unit * sandwich_superop(model.hamiltonian(), id);
  s.add_scaled(-i_unit, sandwich_superop(id, model.hamiltonian()));
  for (const auto& a : model.jumps()) {
    const ComplexMatrix ada = dagger(a) * a;
    s.add_scaled(2.0, sandwich_superop(a, dagger(a)));
    s -= sandwich_superop(ada, id);
    s -= sandwich_superop(id, ada);
  }
  return s;
}

std::vector<ComplexMatrix> propagate_lindblad_raw(const LindbladModel& model, const ComplexMatrix& rho0,
                                                  double dt, std::size_t steps) {
  if (!(dt > 0.0)) fail(ErrorCode::kInvalidArgument, "propagate_lindblad: dt must be positive");
  if (steps < 1) fail(ErrorCode::kInvalidArgument, "propagate_lindblad: at least one step required");
  const std::size_t n = model.dim();
  require_dim(rho0, n, "propagate_lindblad");
  ComplexMatrix generator = lindbladian_superoperator(model);
  generator *= dt;
  const ComplexMatrix propagator = matrix_exp(generator);

  std::vector<ComplexMatrix> out;
  out.reserve(steps + 1);
  out.push_back(rho0);
  ComplexMatrix v = vectorize(rho0);
  ComplexMatrix next(v.rows(), 1);
  for (std::size_t i = 0; i < steps; ++i) {
    gemm(1.0, propagator, Op::kNone, v, Op::kNone, 0.0, next);
    std::swap(v, next);
    out.push_back(hermitian_part(devectorize(v, n)));
    v = vectorize(out.back());
  }
  return out;
}

TimeSeries propagate_lindblad(const LindbladModel& model, const DensityMatrix& rho0, double dt,
                              std::size_t steps) {
  std::vector<ComplexMatrix> raw = propagate_lindblad_raw(model, rho0.matrix(), dt, steps);
  std::vector<DensityMatrix> states;
  states.reserve(raw.size());
  states.push_back(rho0);
  for (std::size_t i = 1; i < raw.size(); ++i) states.emplace_back(std::move(raw[i]), kPropagationStateTol);
  return {dt, std::move(states), {0, "lindblad", 0.0}};
}

ComplexMatrix apply_kraus(const KrausSet& kraus, const ComplexMatrix& rho) {
  const std::size_t n = kraus.dim();
  require_dim(rho, n, "apply_kraus");
  ComplexMatrix out(n, n);
  ComplexMatrix e_rho(n, n);
  for (const auto& e : kraus.ops()) {
    gemm(1.0, e, Op::kNone, rho, Op::kNone, 0.0, e_rho);
    gemm(1.0, e_rho, Op::kNone, e, Op::kAdjoint, 1.0, out);
  }
  return out;
}

std::vector<ComplexMatrix> propagate_kraus_raw(const KrausSet& kraus, const ComplexMatrix& rho0,
                                               std::size_t steps) {
  if (steps < 1) fail(ErrorCode::kInvalidArgument, "propagate_kraus: at least one step required");
  std::vector<ComplexMatrix> out;
  out.reserve(steps + 1);
  out.push_back(rho0);
  for (std::size_t i = 0; i < steps; ++i) out.push_back(hermitian_part(apply_kraus(kraus, out.back())));
  return out;
}

TimeSeries propagate_kraus(const KrausSet& kraus, const DensityMatrix& rho0, std::size_t steps, double dt) {
  std::vector<ComplexMatrix> raw = propagate_kraus_raw(kraus, rho0.matrix(), steps);
  std::vector<DensityMatrix> states;
  states.reserve(raw.size());
  states.push_back(rho0);
  for (std::size_t i = 1; i < raw.size(); ++i) states.emplace_back(std::move(raw[i]), kPropagationStateTol);
  return {dt, std::move(states), {0, "kraus", 0.0}};
}

TimeSeries mix_noise(const TimeSeries& series, double w, Rng& rng) {
  if (!(w >= 0.0 && w < 1.0)) fail(ErrorCode::kInvalidArgument, "mix_noise: w must lie in [0, 1)");
  std::vector<DensityMatrix> states;
  states.reserve(series.states().size());
  for (const auto& s : series.states()) {
    const DensityMatrix noise = random_density_matrix(series.dim(), rng);
    if (w == 0.0) {
      states.push_back(s);
      continue;
    }
    ComplexMatrix mixed = (1.0 - w) * s.matrix();
    mixed.add_scaled(w, noise.matrix());
    states.emplace_back(std::move(mixed), s.tolerance());
  }
  SeriesMetadata meta = series.metadata();
  meta.noise_weight = w;
  return {series.dt(), std::move(states), std::move(meta)};
}

GeneratedData generate_data(const GenerateOptions& opts) {
  if (opts.n < 2) fail(ErrorCode::kInvalidArgument, "generate: n must be at least 2");
  Rng rng(opts.seed);
  LindbladModel model = random_lindblad_model(opts.n, opts.num_jumps, rng, opts.jump_scale);
  const DensityMatrix rho0 = random_density_matrix(opts.n, rng);
  TimeSeries exact = propagate_lindblad(model, rho0, opts.dt, opts.steps);
  exact.metadata() = {opts.seed, "random-lindblad n=" + std::to_string(opts.n) +
                                     " jumps=" + std::to_string(opts.num_jumps) +
                                     " jump_scale=" + std::to_string(opts.jump_scale),
                      0.0};
  Rng noise_rng(hash64({opts.seed, kNoiseStream}));
  TimeSeries noisy = mix_noise(exact, opts.noise_weight, noise_rng);
  return {std::move(model), std::move(exact), std::move(noisy)};
}

}  // namespace qsid
