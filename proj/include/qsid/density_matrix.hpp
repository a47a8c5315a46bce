#pragma once

#include "qsid/matrix.hpp"

namespace qsid {

inline constexpr double kDefaultStateTol = 1e-9;

/// A validated quantum state: Hermitian, unit trace and positive
/// semidefinite, each to within `tolerance`. Construction throws
/// ErrorCode::kValidation on violation.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tolerance = kDefaultStateTol);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  double tolerance() const noexcept { return tolerance_; }

  double purity() const;

  friend bool operator==(const DensityMatrix& a, const DensityMatrix& b) { return a.matrix_ == b.matrix_; }

 private:
  ComplexMatrix matrix_;
  double tolerance_;
};

struct StateDefects {
  double hermiticity;  // ||M - M^dagger||_F
  double trace_error;  // |Tr M - 1|
  double min_eigenvalue;
};

StateDefects state_defects(const ComplexMatrix& m);

/// Pure state |psi><psi| from amplitudes (normalized internally).
DensityMatrix pure_state(std::span<const Complex> amplitudes);

}  // namespace qsid
