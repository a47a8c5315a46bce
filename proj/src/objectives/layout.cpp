#include "qsid/layout.hpp"

#include <string>

#include "qsid/error.hpp"

namespace qsid {

ParameterLayout ParameterLayout::kraus(std::size_t n, std::size_t num_ops) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "layout: n must be positive");
  if (num_ops < 1) fail(ErrorCode::kInvalidArgument, "layout: at least one Kraus operator required");
  return {ModelKind::kKraus, n, num_ops};
}

ParameterLayout ParameterLayout::lindblad(std::size_t n, std::size_t num_jumps) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "layout: n must be positive");
  return {ModelKind::kLindblad, n, num_jumps};
}

std::size_t ParameterLayout::dimension() const noexcept {
  const std::size_t n2 = n_ * n_;
  return ops_offset() + 2 * n2 * num_ops_;
}

void ParameterLayout::require_length(std::span<const double> v) const {
  if (v.size() != dimension()) {
    fail(ErrorCode::kDimensionMismatch, "parameter vector has length " + std::to_string(v.size()) +
                                            ", layout expects " + std::to_string(dimension()));
  }
}

void ParameterLayout::unpack_operator(std::span<const double> v, std::size_t k, ComplexMatrix& out) const {
  const std::size_t n2 = n_ * n_;
  const double* block = v.data() + ops_offset() + 2 * n2 * k;
  Complex* dst = out.data();
  for (std::size_t i = 0; i < n2; ++i) dst[i] = {block[i], block[n2 + i]};
}

void ParameterLayout::unpack_hamiltonian(std::span<const double> v, ComplexMatrix& out) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_; ++i) out(i, i) = v[idx++];
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const Complex z(v[idx], v[idx + 1]);
      idx += 2;
      out(i, j) = z;
      out(j, i) = std::conj(z);
    }
  }
}

void ParameterLayout::pack_operator_gradient(const ComplexMatrix& g, std::size_t k, std::span<double> grad) const {
  const std::size_t n2 = n_ * n_;
  double* block = grad.data() + ops_offset() + 2 * n2 * k;
  const Complex* src = g.data();
  for (std::size_t i = 0; i < n2; ++i) {
    block[i] = src[i].real();
    block[n2 + i] = src[i].imag();
  }
}

void ParameterLayout::pack_hamiltonian_gradient(const ComplexMatrix& g, std::span<double> grad) const {
  // H_ij = x + iy, H_ji = x - iy, so each off-diagonal real parameter picks
  // up the contributions of both entries.
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_; ++i) grad[idx++] = g(i, i).real();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const Complex sym = g(i, j) + std::conj(g(j, i));
      grad[idx++] = sym.real();
      grad[idx++] = sym.imag();
    }
  }
}

std::vector<double> ParameterLayout::encode(const KrausSet& kraus) const {
  if (kind_ != ModelKind::kKraus) fail(ErrorCode::kInvalidArgument, "layout: not a Kraus layout");
  if (kraus.dim() != n_ || kraus.ops().size() != num_ops_) {
    fail(ErrorCode::kDimensionMismatch, "layout: Kraus set does not match layout");
  }
  std::vector<double> v(dimension());
  for (std::size_t k = 0; k < num_ops_; ++k) pack_operator_gradient(kraus.ops()[k], k, v);
  return v;
}

std::vector<double> ParameterLayout::encode(const LindbladModel& model) const {
  if (kind_ != ModelKind::kLindblad) fail(ErrorCode::kInvalidArgument, "layout: not a Lindblad layout");
  if (model.dim() != n_ || model.jumps().size() != num_ops_) {
    fail(ErrorCode::kDimensionMismatch, "layout: Lindblad model does not match layout");
  }
  std::vector<double> v(dimension());
  const ComplexMatrix& h = model.hamiltonian();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_; ++i) v[idx++] = h(i, i).real();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      v[idx++] = h(i, j).real();
      v[idx++] = h(i, j).imag();
    }
  }
  for (std::size_t k = 0; k < num_ops_; ++k) pack_operator_gradient(model.jumps()[k], k, v);
  return v;
}

KrausSet ParameterLayout::decode_kraus(std::span<const double> v) const {
  if (kind_ != ModelKind::kKraus) fail(ErrorCode::kInvalidArgument, "layout: not a Kraus layout");
  require_length(v);
  std::vector<ComplexMatrix> ops(num_ops_, ComplexMatrix(n_, n_));
  for (std::size_t k = 0; k < num_ops_; ++k) unpack_operator(v, k, ops[k]);
  return KrausSet(std::move(ops));
}

LindbladModel ParameterLayout::decode_lindblad(std::span<const double> v) const {
  if (kind_ != ModelKind::kLindblad) fail(ErrorCode::kInvalidArgument, "layout: not a Lindblad layout");
  require_length(v);
  ComplexMatrix h(n_, n_);
  unpack_hamiltonian(v, h);
  std::vector<ComplexMatrix> jumps(num_ops_, ComplexMatrix(n_, n_));
  for (std::size_t k = 0; k < num_ops_; ++k) unpack_operator(v, k, jumps[k]);
  return {std::move(h), std::move(jumps)};
}

ParameterVector::ParameterVector(ParameterLayout layout, std::vector<double> values)
    : layout_(layout), values_(std::move(values)) {
  if (values_.size() != layout_.dimension()) {
    fail(ErrorCode::kDimensionMismatch, "ParameterVector: length does not match layout");
  }
}

ParameterVector::ParameterVector(ParameterLayout layout)
    : layout_(layout), values_(layout.dimension(), 0.0) {}

}  // namespace qsid
