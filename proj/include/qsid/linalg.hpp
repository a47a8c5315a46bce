#pragma once

#include <cstddef>
#include <vector>

#include "qsid/matrix.hpp"

namespace qsid {

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors stored as the columns of `vectors`.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

/// Cyclic complex Jacobi. Only the Hermitian part of `m` is used.
HermitianEigen eigh(const ComplexMatrix& m);

inline constexpr double kDefaultClampTol = 1e-8;

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-clamp_tol, 0) are clamped to zero; anything more negative, or a
/// non-Hermitian input, is rejected with ErrorCode::kValidation.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, double clamp_tol = kDefaultClampTol);

/// Scaling-and-squaring with the degree-13 diagonal Pade approximant.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

/// Solves a x = b by LU with partial pivoting; b may have several columns.
ComplexMatrix solve(ComplexMatrix a, ComplexMatrix b);

/// Column-stacking: vec(M)[j*rows + i] = M(i, j). Returned as a column.
ComplexMatrix vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const ComplexMatrix& v, std::size_t n);

/// S with S vec(X) = vec(A X B), i.e. S = B^T (x) A.
ComplexMatrix sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qsid
