#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qsid/density_matrix.hpp"
#include "qsid/matrix.hpp"

namespace qsid {

/// All randomness flows through an explicit engine passed by reference.
using Rng = std::mt19937_64;

/// Generator of a Lindblad master equation with hbar = 1:
///   L[rho] = i[H, rho] + sum_j (2 A_j rho A_j^dagger - {A_j^dagger A_j, rho}).
class LindbladModel {
 public:
  LindbladModel(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> jumps);

  std::size_t dim() const noexcept { return hamiltonian_.rows(); }
  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<ComplexMatrix>& jumps() const noexcept { return jumps_; }

  static LindbladModel zero(std::size_t n, std::size_t num_jumps = 0);

 private:
  ComplexMatrix hamiltonian_;
  std::vector<ComplexMatrix> jumps_;
};

/// Operator-sum channel rho -> sum_k E_k rho E_k^dagger. The completeness
/// residual ||sum_k E_k^dagger E_k - 1||_F is recorded, not enforced.
class KrausSet {
 public:
  explicit KrausSet(std::vector<ComplexMatrix> ops);

  std::size_t dim() const noexcept { return ops_.front().rows(); }
  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
  double completeness_residual() const noexcept { return residual_; }

 private:
  std::vector<ComplexMatrix> ops_;
  double residual_ = 0.0;
};

struct SeriesMetadata {
  std::uint64_t seed = 0;
  std::string generator;
  double noise_weight = 0.0;
};

/// Uniformly sampled trajectory rho_(0) ... rho_(N), N >= 1.
class TimeSeries {
 public:
  TimeSeries(double dt, std::vector<DensityMatrix> states, SeriesMetadata meta = {});

  double dt() const noexcept { return dt_; }
  std::size_t dim() const noexcept { return states_.front().dim(); }
  /// Number of transitions N (there are N + 1 states).
  std::size_t steps() const noexcept { return states_.size() - 1; }
  const std::vector<DensityMatrix>& states() const noexcept { return states_; }
  const DensityMatrix& operator[](std::size_t i) const { return states_.at(i); }
  const SeriesMetadata& metadata() const noexcept { return meta_; }
  SeriesMetadata& metadata() noexcept { return meta_; }

 private:
  double dt_;
  std::vector<DensityMatrix> states_;
  SeriesMetadata meta_;
};

inline constexpr double kDefaultJumpScale = 0.1;
inline constexpr double kPropagationStateTol = 1e-8;

// Random generators. Complex Gaussians are standard: E|z|^2 = 1.
ComplexMatrix random_ginibre(std::size_t n, Rng& rng);
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);
DensityMatrix random_density_matrix(std::size_t n, Rng& rng);
ComplexMatrix random_jump_operator(std::size_t n, Rng& rng, double scale = kDefaultJumpScale);
LindbladModel random_lindblad_model(std::size_t n, std::size_t num_jumps, Rng& rng,
                                    double jump_scale = kDefaultJumpScale);

ComplexMatrix lindbladian_apply(const LindbladModel& model, const ComplexMatrix& rho);
ComplexMatrix lindbladian_superoperator(const LindbladModel& model);

/// Exact stroboscopic propagation: P = exp(dt * superop) applied N times.
/// States are re-Hermitized and validated at kPropagationStateTol.
TimeSeries propagate_lindblad(const LindbladModel& model, const DensityMatrix& rho0, double dt,
                              std::size_t steps);
/// Same propagation without validation, for identified models.
std::vector<ComplexMatrix> propagate_lindblad_raw(const LindbladModel& model, const ComplexMatrix& rho0,
                                                  double dt, std::size_t steps);

ComplexMatrix apply_kraus(const KrausSet& kraus, const ComplexMatrix& rho);
TimeSeries propagate_kraus(const KrausSet& kraus, const DensityMatrix& rho0, std::size_t steps,
                           double dt = 1.0);
std::vector<ComplexMatrix> propagate_kraus_raw(const KrausSet& kraus, const ComplexMatrix& rho0,
                                               std::size_t steps);

/// rho_noisy(i) = (1 - w) rho(i) + w rho_rand(i), one independent random
/// state per index, drawn in index order from `rng`.
TimeSeries mix_noise(const TimeSeries& series, double w, Rng& rng);

/// Parameters of the synthetic data used in experiments and by
/// `qsid generate`.
struct GenerateOptions {
  std::size_t n = 2;
  std::size_t num_jumps = 1;
  std::size_t steps = 49;
  double dt = 0.1;
  double jump_scale = kDefaultJumpScale;
  double noise_weight = 0.0;
  std::uint64_t seed = 0;
};

struct GeneratedData {
  LindbladModel model;
  TimeSeries exact;
  TimeSeries noisy;
};

/// Draws H, the jumps and rho0 from `seed`, propagates exactly, then mixes
/// noise from an independent stream derived from the same seed. The noise
/// draws do not depend on the weight, so series for different w are affine
/// in w.
GeneratedData generate_data(const GenerateOptions& opts);

}  // namespace qsid
