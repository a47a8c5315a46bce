#include "qsid/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsid/error.hpp"

namespace qsid {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kDimensionMismatch,
         std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
             std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
             std::to_string(b.cols()) + " differ");
  }
}

void require_square_pair(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + ": operands must be square and equal-sized");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    fail(ErrorCode::kDimensionMismatch, "ComplexMatrix: entry count " + std::to_string(data_.size()) +
                                            " does not match " + std::to_string(rows_) + "x" +
                                            std::to_string(cols_));
  }
  if (!all_finite()) fail(ErrorCode::kInvalidArgument, "ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) fail(ErrorCode::kDimensionMismatch, "ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

void ComplexMatrix::set_zero() noexcept { std::fill(data_.begin(), data_.end(), Complex{}); }

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
  for (auto& z : data_) z *= scale;
  return *this;
}

void ComplexMatrix::add_scaled(Complex scale, const ComplexMatrix& other) {
  require_same_shape(*this, other, "add_scaled");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  gemm(1.0, a, Op::kNone, b, Op::kNone, 0.0, c);
  return c;
}

void gemm(Complex alpha, const ComplexMatrix& a, Op op_a, const ComplexMatrix& b, Op op_b,
          Complex beta, ComplexMatrix& c) {
  const std::size_t m = op_a == Op::kNone ? a.rows() : a.cols();
  const std::size_t k = op_a == Op::kNone ? a.cols() : a.rows();
  const std::size_t kb = op_b == Op::kNone ? b.rows() : b.cols();
  const std::size_t n = op_b == Op::kNone ? b.cols() : b.rows();
  if (k != kb || c.rows() != m || c.cols() != n) {
    fail(ErrorCode::kDimensionMismatch, "gemm: inconsistent operand shapes");
  }
  const Complex* pa = a.data();
  const Complex* pb = b.data();
  const std::size_t lda = a.cols();
  const std::size_t ldb = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t l = 0; l < k; ++l) {
        const Complex x = op_a == Op::kNone ? pa[i * lda + l] : std::conj(pa[l * lda + i]);
        const Complex y = op_b == Op::kNone ? pb[l * ldb + j] : std::conj(pb[j * ldb + l]);
        acc += x * y;
      }
      Complex& out = c(i, j);
      out = beta == Complex{} ? alpha * acc : alpha * acc + beta * out;
    }
  }
}

double frobenius_norm_squared(const ComplexMatrix& m) noexcept {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return s;
}

double frobenius_norm(const ComplexMatrix& m) noexcept { return std::sqrt(frobenius_norm_squared(m)); }

Complex trace(const ComplexMatrix& m) {
  if (!m.is_square()) fail(ErrorCode::kDimensionMismatch, "trace: matrix is not square");
  Complex t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (auto& z : out.entries()) z = std::conj(z);
  return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  if (!m.is_square()) fail(ErrorCode::kDimensionMismatch, "hermitian_part: matrix is not square");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      out(i, j) = z;
      out(j, i) = std::conj(z);
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square_pair(a, b, "commutator");
  ComplexMatrix c(a.rows(), a.cols());
  gemm(1.0, a, Op::kNone, b, Op::kNone, 0.0, c);
  gemm(-1.0, b, Op::kNone, a, Op::kNone, 1.0, c);
  return c;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square_pair(a, b, "anticommutator");
  ComplexMatrix c(a.rows(), a.cols());
  gemm(1.0, a, Op::kNone, b, Op::kNone, 0.0, c);
  gemm(1.0, b, Op::kNone, a, Op::kNone, 1.0, c);
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimensionMismatch, "real_inner: size mismatch");
  double s = 0.0;
  const Complex* pa = a.data();
  const Complex* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += pa[i].real() * pb[i].real() + pa[i].imag() * pb[i].imag();
  return s;
}

}  // namespace qsid
