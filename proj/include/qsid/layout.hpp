#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsid/dynamics.hpp"

namespace qsid {

enum class ModelKind { kKraus, kLindblad };

/// Maps a flat real parameter vector onto model operators.
///
/// Kraus: 2 l n^2 reals. Operator k occupies [2 n^2 k, 2 n^2 (k + 1)): first
/// the n^2 real parts row-major, then the n^2 imaginary parts.
///
/// Lindblad: n^2 reals for the Hermitian H (the n diagonal entries, then for
/// each i < j in row-major order Re H_ij and Im H_ij), followed by 2 n^2
/// reals per jump operator laid out as for Kraus.
class ParameterLayout {
 public:
  static ParameterLayout kraus(std::size_t n, std::size_t num_ops);
  static ParameterLayout lindblad(std::size_t n, std::size_t num_jumps);

  ModelKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t num_ops() const noexcept { return num_ops_; }
  std::size_t dimension() const noexcept;
  /// Offset of the first operator block (0 for Kraus, n^2 for Lindblad).
  std::size_t ops_offset() const noexcept { return kind_ == ModelKind::kKraus ? 0 : n_ * n_; }

  std::vector<double> encode(const KrausSet& kraus) const;
  std::vector<double> encode(const LindbladModel& model) const;
  KrausSet decode_kraus(std::span<const double> v) const;
  LindbladModel decode_lindblad(std::span<const double> v) const;

  // Low-level views used by the objective kernels.
  void unpack_operator(std::span<const double> v, std::size_t k, ComplexMatrix& out) const;
  void unpack_hamiltonian(std::span<const double> v, ComplexMatrix& out) const;
  /// Writes the real gradient of a complex operator block given
  /// G = dF/dRe + i dF/dIm.
  void pack_operator_gradient(const ComplexMatrix& g, std::size_t k, std::span<double> grad) const;
  /// Same for H given the Hermitian Wirtinger-style gradient G.
  void pack_hamiltonian_gradient(const ComplexMatrix& g, std::span<double> grad) const;

  friend bool operator==(const ParameterLayout&, const ParameterLayout&) = default;

 private:
  ParameterLayout(ModelKind kind, std::size_t n, std::size_t num_ops) : kind_(kind), n_(n), num_ops_(num_ops) {}
  void require_length(std::span<const double> v) const;

  ModelKind kind_;
  std::size_t n_;
  std::size_t num_ops_;
};

/// Flat parameters tied to their layout; the length always matches.
class ParameterVector {
 public:
  ParameterVector(ParameterLayout layout, std::vector<double> values);
  explicit ParameterVector(ParameterLayout layout);

  const ParameterLayout& layout() const noexcept { return layout_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  ParameterLayout layout_;
  std::vector<double> values_;
};

}  // namespace qsid
