#include "qsid/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "qsid/error.hpp"

namespace qsid {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square() || m.empty()) fail(ErrorCode::kDimensionMismatch, std::string(what) + ": matrix must be square");
}

double off_diagonal_squared(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) s += std::norm(a(p, q));
  return s;
}

double one_norm(const ComplexMatrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

HermitianEigen eigh(const ComplexMatrix& m) {
  require_square(m, "eigh");
  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale2 = frobenius_norm_squared(a);

  for (int sweep = 0; sweep < 64; ++sweep) {
    if (off_diagonal_squared(a) <= 1e-32 * scale2) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const Complex phase = apq / mag;
        const double zeta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on the (p, q) plane.
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, double clamp_tol) {
  require_square(m, "psd_sqrt");
  const double norm = frobenius_norm(m);
  if (frobenius_norm(m - dagger(m)) > clamp_tol * std::max(1.0, norm)) {
    fail(ErrorCode::kValidation, "psd_sqrt: matrix is not Hermitian");
  }
  const HermitianEigen eig = eigh(m);
  if (eig.values.front() < -clamp_tol) {
    fail(ErrorCode::kValidation,
         "psd_sqrt: eigenvalue " + std::to_string(eig.values.front()) + " below -" + std::to_string(clamp_tol));
  }
  const std::size_t n = m.rows();
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, eig.values[k]));
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= root;
  }
  ComplexMatrix out(n, n);
  gemm(1.0, scaled, Op::kNone, eig.vectors, Op::kAdjoint, 0.0, out);
  return hermitian_part(out);
}

ComplexMatrix solve(ComplexMatrix a, ComplexMatrix b) {
  require_square(a, "solve");
  const std::size_t n = a.rows();
  if (b.rows() != n) fail(ErrorCode::kDimensionMismatch, "solve: right-hand side has wrong row count");
  const std::size_t nrhs = b.cols();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) == 0.0) fail(ErrorCode::kNumerical, "solve: singular matrix");
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(col, k), a(pivot, k));
      for (std::size_t k = 0; k < nrhs; ++k) std::swap(b(col, k), b(pivot, k));
    }
    const Complex inv = 1.0 / a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = a(r, col) * inv;
      if (factor == Complex{}) continue;
      for (std::size_t k = col; k < n; ++k) a(r, k) -= factor * a(col, k);
      for (std::size_t k = 0; k < nrhs; ++k) b(r, k) -= factor * b(col, k);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const Complex inv = 1.0 / a(col, col);
    for (std::size_t k = 0; k < nrhs; ++k) {
      Complex acc = b(col, k);
      for (std::size_t j = col + 1; j < n; ++j) acc -= a(col, j) * b(j, k);
      b(col, k) = acc * inv;
    }
  }
  return b;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  require_square(m, "matrix_exp");
  if (!m.all_finite()) fail(ErrorCode::kNumerical, "matrix_exp: non-finite input");
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const std::size_t n = m.rows();
  const double norm = one_norm(m);
  if (norm == 0.0) return ComplexMatrix::identity(n);
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  if (squarings > 1000) fail(ErrorCode::kNumerical, "matrix_exp: norm too large");

  ComplexMatrix a = m;
  a *= std::ldexp(1.0, -squarings);
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  ComplexMatrix inner_u = b[13] * a6;
  inner_u.add_scaled(b[11], a4);
  inner_u.add_scaled(b[9], a2);
  ComplexMatrix u = a6 * inner_u;
  u.add_scaled(b[7], a6);
  u.add_scaled(b[5], a4);
  u.add_scaled(b[3], a2);
  u.add_scaled(b[1], id);
  u = a * u;

  ComplexMatrix inner_v = b[12] * a6;
  inner_v.add_scaled(b[10], a4);
  inner_v.add_scaled(b[8], a2);
  ComplexMatrix v = a6 * inner_v;
  v.add_scaled(b[6], a6);
  v.add_scaled(b[4], a4);
  v.add_scaled(b[2], a2);
  v.add_scaled(b[0], id);

  ComplexMatrix result = solve(v - u, v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  if (!result.all_finite()) fail(ErrorCode::kNumerical, "matrix_exp: overflow");
  return result;
}

ComplexMatrix vectorize(const ComplexMatrix& m) {
  ComplexMatrix v(m.rows() * m.cols(), 1);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v(j * m.rows() + i, 0) = m(i, j);
  return v;
}

ComplexMatrix devectorize(const ComplexMatrix& v, std::size_t n) {
  if (v.size() != n * n || (v.cols() != 1 && v.rows() != 1)) {
    fail(ErrorCode::kDimensionMismatch, "devectorize: expected a vector of length " + std::to_string(n * n));
  }
  ComplexMatrix m(n, n);
  const auto e = v.entries();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = e[j * n + i];
  return m;
}

ComplexMatrix sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    fail(ErrorCode::kDimensionMismatch, "sandwich_superop: operands must be square and equal-sized");
  }
  return kron(transpose(b), a);
}

}  // namespace qsid
