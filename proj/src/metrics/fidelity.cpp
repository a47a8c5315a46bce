#include <algorithm>
#include <cmath>

#include "qsid/error.hpp"
#include "qsid/linalg.hpp"
#include "qsid/metrics.hpp"

namespace qsid {

namespace {

constexpr double kFidelityStateTol = 1e-6;

void require_valid(const DensityMatrix& s) {
  // Re-validate at the fidelity tolerance regardless of how the state was
  // constructed.
  const StateDefects d = state_defects(s.matrix());
  if (d.hermiticity > kFidelityStateTol || d.trace_error > kFidelityStateTol ||
      d.min_eigenvalue < -kFidelityStateTol) {
    fail(ErrorCode::kValidation, "fidelity: input is not a valid density matrix");
  }
}

}  // namespace

FidelityResult fidelity_detailed(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) fail(ErrorCode::kDimensionMismatch, "fidelity: states differ in dimension");
  require_valid(rho);
  require_valid(sigma);
  const std::size_t n = rho.dim();
  const ComplexMatrix root = psd_sqrt(rho.matrix(), kFidelityStateTol);
  ComplexMatrix tmp(n, n);
  ComplexMatrix inner(n, n);
  gemm(1.0, root, Op::kNone, sigma.matrix(), Op::kNone, 0.0, tmp);
  gemm(1.0, tmp, Op::kNone, root, Op::kNone, 0.0, inner);
  double raw = 0.0;
  for (double lambda : eigh(inner).values) raw += std::sqrt(std::max(0.0, lambda));
  const double value = std::clamp(raw, 0.0, 1.0);
  return {value, std::abs(raw - value)};
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return fidelity_detailed(rho, sigma).value;
}

double min_fidelity(const TimeSeries& exact, const TimeSeries& sid) {
  if (exact.states().size() != sid.states().size()) {
    fail(ErrorCode::kDimensionMismatch, "min_fidelity: series lengths differ");
  }
  if (exact.dim() != sid.dim()) fail(ErrorCode::kDimensionMismatch, "min_fidelity: series dimensions differ");
  double worst = 1.0;
  for (std::size_t i = 0; i < exact.states().size(); ++i) worst = std::min(worst, fidelity(exact[i], sid[i]));
  return worst;
}

}  // namespace qsid
