#include <doctest.h>

#include <cmath>
#include <random>

#include "qsid/density_matrix.hpp"
#include "qsid/error.hpp"
#include "qsid/linalg.hpp"
#include "qsid/matrix.hpp"
#include "qsid/wire.hpp"

using namespace qsid;

namespace {

const Complex I1{0.0, 1.0};

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  ComplexMatrix m(r, c);
  for (auto& z : m.entries()) z = {nd(rng), nd(rng)};
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
  return d;
}

// Truncated Taylor series with enough terms for small-norm inputs.
ComplexMatrix series_exp(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  ComplexMatrix sum = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k < 60; ++k) {
    term = term * a;
    term *= 1.0 / k;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("matrix construction validates shape and finiteness") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), Error);
  CHECK_THROWS_AS(ComplexMatrix(1, 1, std::vector<Complex>{Complex(NAN, 0.0)}), Error);
  const ComplexMatrix m{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(1, 0) == Complex(3.0));
}

TEST_CASE("frobenius norm examples") {
  CHECK(frobenius_norm(ComplexMatrix::identity(2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(frobenius_norm(ComplexMatrix::zero(3, 3)) == 0.0);
  const ComplexMatrix m{{1.0, I1}, {0.0, 1.0}};
  CHECK(frobenius_norm(m) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("frobenius norm is a norm on random matrices") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix a = random_matrix(3, 3, rng);
    const ComplexMatrix b = random_matrix(3, 3, rng);
    CHECK(frobenius_norm(a + b) <= frobenius_norm(a) + frobenius_norm(b) + 1e-12);
    const Complex c{-1.7, 0.4};
    CHECK(frobenius_norm(c * a) == doctest::Approx(std::abs(c) * frobenius_norm(a)).epsilon(1e-12));
  }
}

TEST_CASE("dagger, commutator and anticommutator") {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = random_matrix(3, 3, rng);
  const ComplexMatrix id = ComplexMatrix::identity(3);
  CHECK(frobenius_norm(commutator(id, m)) == 0.0);
  CHECK(max_abs_diff(anticommutator(id, m), 2.0 * m) == 0.0);
  CHECK(dagger(dagger(m)) == m);
  CHECK(dagger(m)(0, 1) == std::conj(m(1, 0)));
  CHECK_THROWS_AS(commutator(id, ComplexMatrix::identity(2)), Error);
}

TEST_CASE("gemm respects adjoint flags") {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = random_matrix(3, 2, rng);
  const ComplexMatrix b = random_matrix(3, 4, rng);
  ComplexMatrix c(2, 4);
  gemm(1.0, a, Op::kAdjoint, b, Op::kNone, 0.0, c);
  CHECK(max_abs_diff(c, dagger(a) * b) < 1e-14);
}

TEST_CASE("kron follows the standard block layout") {
  const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const ComplexMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == Complex(1.0));
  CHECK(k(0, 3) == Complex(2.0));
  CHECK(k(2, 1) == Complex(3.0));
  CHECK(k(3, 2) == Complex(4.0));
  CHECK(k(1, 3) == Complex(0.0));
}

TEST_CASE("Hermitian eigensolver residuals") {
  std::mt19937_64 rng(17);
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    const ComplexMatrix h = hermitian_part(random_matrix(n, n, rng));
    const HermitianEigen e = eigh(h);
    for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] <= e.values[k]);
    for (std::size_t k = 0; k < n; ++k) {
      ComplexMatrix v(n, 1);
      for (std::size_t r = 0; r < n; ++r) v(r, 0) = e.vectors(r, k);
      const ComplexMatrix res = h * v - Complex(e.values[k]) * v;
      CHECK(frobenius_norm(res) <= 1e-11 * frobenius_norm(h));
    }
    CHECK(max_abs_diff(dagger(e.vectors) * e.vectors, ComplexMatrix::identity(n)) < 1e-12);
  }
}

TEST_CASE("psd_sqrt examples") {
  CHECK(max_abs_diff(psd_sqrt(ComplexMatrix::identity(2)), ComplexMatrix::identity(2)) < 1e-14);
  const std::vector<Complex> d{4.0, 9.0};
  const std::vector<Complex> r{2.0, 3.0};
  CHECK(max_abs_diff(psd_sqrt(ComplexMatrix::diagonal(d)), ComplexMatrix::diagonal(r)) < 1e-14);
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> plus_amp{s, s};
  const ComplexMatrix plus = pure_state(plus_amp).matrix();
  CHECK(max_abs_diff(psd_sqrt(plus), plus) < 1e-12);
}

TEST_CASE("psd_sqrt squares back on random PSD matrices") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const ComplexMatrix g = random_matrix(4, 4, rng);
    ComplexMatrix m = hermitian_part(g * dagger(g));
    const ComplexMatrix root = psd_sqrt(m);
    CHECK(frobenius_norm(root - dagger(root)) < 1e-12);
    CHECK(eigh(root).values.front() >= -1e-12);
    CHECK(frobenius_norm(root * root - m) <= 1e-10 * frobenius_norm(m));
  }
}

TEST_CASE("psd_sqrt rejects non-Hermitian or clearly negative input") {
  const ComplexMatrix not_herm{{1.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(psd_sqrt(not_herm), Error);
  const std::vector<Complex> d{1.0, -1e-3};
  CHECK_THROWS_AS(psd_sqrt(ComplexMatrix::diagonal(d)), Error);
  const std::vector<Complex> tiny{1.0, -1e-10};
  const ComplexMatrix clamped = psd_sqrt(ComplexMatrix::diagonal(tiny));
  CHECK(clamped(1, 1) == Complex(0.0));
}

TEST_CASE("matrix_exp closed forms") {
  CHECK(max_abs_diff(matrix_exp(ComplexMatrix::zero(3, 3)), ComplexMatrix::identity(3)) == 0.0);
  const std::vector<Complex> d{0.3, -2.0};
  const std::vector<Complex> ed{std::exp(0.3), std::exp(-2.0)};
  CHECK(max_abs_diff(matrix_exp(ComplexMatrix::diagonal(d)), ComplexMatrix::diagonal(ed)) < 1e-14);

  const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
  for (double theta : {0.1, 1.0, 2.5, 7.0}) {
    const ComplexMatrix e = matrix_exp(Complex(0.0, theta) * sx);
    const ComplexMatrix closed = Complex(std::cos(theta)) * ComplexMatrix::identity(2) + Complex(0.0, std::sin(theta)) * sx;
    CHECK(max_abs_diff(e, closed) < 1e-13);
    if (theta < 3.0) CHECK(max_abs_diff(e, series_exp(Complex(0.0, theta) * sx)) < 1e-13);
  }
}

TEST_CASE("matrix_exp agrees with the Taylor series and inverts") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 30; ++t) {
    ComplexMatrix a = random_matrix(4, 4, rng);
    a *= (0.5 + t % 5) / frobenius_norm(a);  // norms 0.5 .. 4.5
    const ComplexMatrix e = matrix_exp(a);
    const ComplexMatrix ref = series_exp(a);
    CHECK(frobenius_norm(e - ref) <= 1e-12 * frobenius_norm(ref));
    CHECK(max_abs_diff(e * matrix_exp(-a), ComplexMatrix::identity(4)) < 1e-10);
  }
}

TEST_CASE("matrix_exp is accurate for large norms") {
  // exp(diag(50, -50)) conjugated by a fixed unitary: relative accuracy.
  const double s = 1.0 / std::sqrt(2.0);
  const ComplexMatrix u{{s, s}, {s, -s}};
  const std::vector<Complex> d{50.0, -50.0};
  const std::vector<Complex> ed{std::exp(50.0), std::exp(-50.0)};
  const ComplexMatrix e = matrix_exp(u * ComplexMatrix::diagonal(d) * u);
  const ComplexMatrix ref = u * ComplexMatrix::diagonal(ed) * u;
  CHECK(frobenius_norm(e - ref) <= 1e-12 * frobenius_norm(ref));
}

TEST_CASE("matrix_exp rejects non-square input") {
  CHECK_THROWS_AS(matrix_exp(ComplexMatrix(2, 3)), Error);
}

TEST_CASE("solve inverts random systems") {
  std::mt19937_64 rng(31);
  const ComplexMatrix a = random_matrix(5, 5, rng);
  const ComplexMatrix x = random_matrix(5, 2, rng);
  CHECK(max_abs_diff(solve(a, a * x), x) < 1e-11);
}

TEST_CASE("vectorization and sandwich superoperator") {
  const ComplexMatrix s = sandwich_superop(ComplexMatrix::identity(3), ComplexMatrix::identity(3));
  CHECK(s == ComplexMatrix::identity(9));

  std::mt19937_64 rng(37);
  for (std::size_t n = 1; n <= 8; ++n) {
    const ComplexMatrix m = random_matrix(n, n, rng);
    const ComplexMatrix v = vectorize(m);
    CHECK(v.rows() == n * n);
    if (n > 1) {
      CHECK(v(1, 0) == m(1, 0));  // columns are stacked
      CHECK(v(n, 0) == m(0, 1));
    }
    CHECK(devectorize(v, n) == m);
  }
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = random_matrix(2, 2, rng);
    const ComplexMatrix b = random_matrix(2, 2, rng);
    const ComplexMatrix x = random_matrix(2, 2, rng);
    CHECK(max_abs_diff(sandwich_superop(a, b) * vectorize(x), vectorize(a * x * b)) < 1e-13);
  }
  CHECK_THROWS_AS(devectorize(ComplexMatrix(5, 1), 2), Error);
}

TEST_CASE("density matrix validation") {
  const ComplexMatrix half{{0.5, 0.0}, {0.0, 0.5}};
  const DensityMatrix rho(half);
  CHECK(rho.dim() == 2);
  CHECK(rho.purity() == doctest::Approx(0.5));

  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{0.6, 0.0}, {0.0, 0.5}}), Error);   // trace
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{0.5, 0.1}, {0.0, 0.5}}), Error);   // Hermiticity
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{1.2, 0.0}, {0.0, -0.2}}), Error);  // PSD
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix(2, 3)), Error);
  // Within a looser tolerance the same small defect is accepted.
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix{{0.5 + 1e-8, 0.0}, {0.0, 0.5}}, 1e-6));

  const StateDefects d = state_defects(ComplexMatrix{{1.2, 0.0}, {0.0, -0.2}});
  CHECK(d.min_eigenvalue == doctest::Approx(-0.2));
  CHECK(d.trace_error == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("wire format round-trips matrices exactly") {
  std::mt19937_64 rng(41);
  const ComplexMatrix m = random_matrix(3, 3, rng);
  const Json j = matrix_to_json(m);
  CHECK(j.size() == 3);
  CHECK(j[0][0].size() == 2);
  CHECK(matrix_from_json(Json::parse(j.dump())) == m);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 2]]")), Error);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[[1, 0]], [[1, 0], [0, 0]]]")), Error);
}
