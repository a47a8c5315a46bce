#include "qsid/density_matrix.hpp"

#include <cmath>
#include <sstream>

#include "qsid/error.hpp"
#include "qsid/linalg.hpp"

namespace qsid {

StateDefects state_defects(const ComplexMatrix& m) {
  if (!m.is_square() || m.empty()) fail(ErrorCode::kDimensionMismatch, "density matrix must be square");
  return {frobenius_norm(m - dagger(m)), std::abs(trace(m) - 1.0), eigh(m).values.front()};
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tolerance)
    : matrix_(std::move(m)), tolerance_(tolerance) {
  if (!matrix_.all_finite()) fail(ErrorCode::kValidation, "density matrix has non-finite entries");
  const StateDefects d = state_defects(matrix_);
  if (d.hermiticity > tolerance_ || d.trace_error > tolerance_ || d.min_eigenvalue < -tolerance_) {
    std::ostringstream msg;
    msg << "invalid density matrix: hermiticity defect " << d.hermiticity << ", trace error "
        << d.trace_error << ", min eigenvalue " << d.min_eigenvalue << " (tolerance " << tolerance_ << ")";
    fail(ErrorCode::kValidation, msg.str());
  }
}

double DensityMatrix::purity() const { return real_inner(matrix_, matrix_); }

DensityMatrix pure_state(std::span<const Complex> amplitudes) {
  double norm2 = 0.0;
  for (const auto& z : amplitudes) norm2 += std::norm(z);
  if (norm2 == 0.0) fail(ErrorCode::kInvalidArgument, "pure_state: zero vector");
  const std::size_t n = amplitudes.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
  return DensityMatrix(std::move(m));
}

}  // namespace qsid
