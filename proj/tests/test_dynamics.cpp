#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "qsid/dynamics.hpp"
#include "qsid/error.hpp"
#include "qsid/linalg.hpp"
#include "qsid/series_io.hpp"

using namespace qsid;

namespace {

const ComplexMatrix kSigmaZ{{1.0, 0.0}, {0.0, -1.0}};

LindbladModel dephasing(double gamma) {
  ComplexMatrix a = kSigmaZ;
  a *= std::sqrt(gamma / 2.0);
  return LindbladModel(ComplexMatrix::zero(2, 2), {a});
}

KrausSet amplitude_damping(double p) {
  return KrausSet({ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p)}}, ComplexMatrix{{0.0, std::sqrt(p)}, {0.0, 0.0}}});
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
  return d;
}

}  // namespace

TEST_CASE("random_hermitian is exactly Hermitian and reproducible") {
  Rng a(5);
  Rng b(5);
  const ComplexMatrix h1 = random_hermitian(3, a);
  const ComplexMatrix h2 = random_hermitian(3, b);
  CHECK(h1 == h2);
  CHECK(h1 == dagger(h1));
}

TEST_CASE("random_hermitian entries have zero mean") {
  // Diagonal entries ~ N(0, 1/2); off-diagonal real and imaginary parts ~ N(0, 1/4).
  Rng rng(101);
  constexpr int kDraws = 10000;
  double diag = 0.0;
  double off_re = 0.0;
  double off_im = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    const ComplexMatrix h = random_hermitian(2, rng);
    diag += h(0, 0).real();
    off_re += h(0, 1).real();
    off_im += h(0, 1).imag();
  }
  CHECK(std::abs(diag / kDraws) <= 3.0 * std::sqrt(0.5 / kDraws));
  CHECK(std::abs(off_re / kDraws) <= 3.0 * std::sqrt(0.25 / kDraws));
  CHECK(std::abs(off_im / kDraws) <= 3.0 * std::sqrt(0.25 / kDraws));
}

TEST_CASE("random_density_matrix is a valid state") {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix rho = random_density_matrix(3, rng);
    const StateDefects d = state_defects(rho.matrix());
    CHECK(d.trace_error <= 1e-12);
    CHECK(d.hermiticity == 0.0);
    CHECK(d.min_eigenvalue >= -1e-12);
  }
}

TEST_CASE("Ginibre qubit purity statistics") {
  // For trace-normalized Ginibre qubits E[Tr rho^2] = 4/5, so the mean
  // squared Bloch radius 2 Tr rho^2 - 1 is 3/5.
  Rng rng(2024);
  constexpr int kDraws = 10000;
  double purity = 0.0;
  for (int t = 0; t < kDraws; ++t) purity += random_density_matrix(2, rng).purity();
  purity /= kDraws;
  CHECK(purity == doctest::Approx(0.8).epsilon(0.02 / 0.8));
  CHECK(2.0 * purity - 1.0 == doctest::Approx(0.6).epsilon(0.02 / 0.6));
}

TEST_CASE("random_jump_operator scale") {
  Rng rng(9);
  constexpr int kDraws = 10000;
  const double gamma = 0.3;
  double total = 0.0;
  for (int t = 0; t < kDraws; ++t) total += frobenius_norm_squared(random_jump_operator(3, rng, gamma));
  CHECK(total / kDraws == doctest::Approx(gamma * 9.0).epsilon(0.05));

  Rng zero_rng(1);
  CHECK(frobenius_norm(random_jump_operator(2, zero_rng, 0.0)) == 0.0);
  Rng a(4);
  Rng b(4);
  CHECK(random_jump_operator(2, a) == random_jump_operator(2, b));
  CHECK_THROWS_AS(random_jump_operator(2, a, -1.0), Error);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(LindbladModel(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, {}), Error);
  CHECK_THROWS_AS(LindbladModel(ComplexMatrix::zero(2, 2), {ComplexMatrix::zero(3, 3)}), Error);
  CHECK_THROWS_AS(KrausSet({}), Error);
  CHECK_THROWS_AS(KrausSet({ComplexMatrix::identity(2), ComplexMatrix::identity(3)}), Error);
}

TEST_CASE("lindbladian_apply examples") {
  const ComplexMatrix rho{{0.7, Complex(0.1, 0.2)}, {Complex(0.1, -0.2), 0.3}};
  CHECK(frobenius_norm(lindbladian_apply(LindbladModel::zero(2, 1), rho)) == 0.0);

  const double gamma = 0.4;
  const ComplexMatrix out = lindbladian_apply(dephasing(gamma), rho);
  const Complex c(0.1, 0.2);
  CHECK(std::abs(out(0, 0)) < 1e-15);
  CHECK(std::abs(out(1, 1)) < 1e-15);
  CHECK(std::abs(out(0, 1) - (-2.0 * gamma * c)) < 1e-15);
  CHECK(std::abs(out(1, 0) - (-2.0 * gamma * std::conj(c))) < 1e-15);

  const LindbladModel h_only(kSigmaZ, {});
  const ComplexMatrix ground{{1.0, 0.0}, {0.0, 0.0}};
  CHECK(frobenius_norm(lindbladian_apply(h_only, ground)) == 0.0);

  // Sign convention: L[rho] = +i[H, rho] for a pure Hamiltonian.
  const ComplexMatrix l = lindbladian_apply(h_only, rho);
  CHECK(max_abs_diff(l, Complex(0.0, 1.0) * commutator(kSigmaZ, rho)) < 1e-15);
}

TEST_CASE("lindbladian_superoperator matches lindbladian_apply") {
  Rng rng(13);
  CHECK(frobenius_norm(lindbladian_superoperator(LindbladModel::zero(2, 2))) == 0.0);
  for (int t = 0; t < 50; ++t) {
    const LindbladModel model = random_lindblad_model(2 + t % 3, 1 + t % 2, rng, 0.5);
    const std::size_t n = model.dim();
    const ComplexMatrix rho = random_density_matrix(n, rng).matrix();
    const ComplexMatrix sup = lindbladian_superoperator(model);
    CHECK(sup.rows() == n * n);
    const ComplexMatrix applied = lindbladian_apply(model, rho);
    const ComplexMatrix via_super = devectorize(sup * vectorize(rho), n);
    CHECK(max_abs_diff(applied, via_super) <= 1e-13 * std::max(1.0, frobenius_norm(applied)));
    CHECK(std::abs(trace(via_super)) <= 1e-13 * std::max(1.0, frobenius_norm(applied)));
  }
}

TEST_CASE("propagation of the zero model is constant") {
  Rng rng(3);
  const DensityMatrix rho0 = random_density_matrix(2, rng);
  const TimeSeries s = propagate_lindblad(LindbladModel::zero(2, 1), rho0, 0.1, 10);
  CHECK(s.steps() == 10);
  for (const auto& st : s.states()) CHECK(max_abs_diff(st.matrix(), rho0.matrix()) < 1e-15);
}

TEST_CASE("dephasing follows the analytic solution") {
  const double gamma = 0.3;
  const double dt = 0.1;
  const ComplexMatrix m{{0.6, Complex(0.3, -0.2)}, {Complex(0.3, 0.2), 0.4}};
  const DensityMatrix rho0(m);
  const TimeSeries s = propagate_lindblad(dephasing(gamma), rho0, dt, 50);
  for (std::size_t i = 0; i <= 50; ++i) {
    const Complex expected = m(0, 1) * std::exp(-2.0 * gamma * dt * static_cast<double>(i));
    CHECK(std::abs(s[i].matrix()(0, 1) - expected) <= 1e-8);
    CHECK(std::abs(s[i].matrix()(0, 0) - 0.6) <= 1e-12);
  }
}

TEST_CASE("propagation preserves trace and Hermiticity for random models") {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const LindbladModel model = random_lindblad_model(2, 1 + t % 2, rng, 1.0);
    const double hnorm = frobenius_norm(model.hamiltonian());
    ComplexMatrix h = model.hamiltonian();
    if (hnorm > 3.0) h *= 3.0 / hnorm;
    const LindbladModel scaled(h, model.jumps());
    const DensityMatrix rho0 = random_density_matrix(2, rng);
    const TimeSeries s = propagate_lindblad(scaled, rho0, 0.1, 200);
    for (const auto& st : s.states()) {
      CHECK(std::abs(trace(st.matrix()) - 1.0) <= 1e-10);
      CHECK(st.matrix() == dagger(st.matrix()));
    }
  }
}

TEST_CASE("unitary propagation conserves purity") {
  Rng rng(19);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix h = random_hermitian(3, rng);
    const DensityMatrix rho0 = random_density_matrix(3, rng);
    const TimeSeries s = propagate_lindblad(LindbladModel(h, {}), rho0, 0.1, 100);
    for (const auto& st : s.states()) CHECK(std::abs(st.purity() - rho0.purity()) <= 1e-9);
  }
}

TEST_CASE("Kraus maps") {
  Rng rng(23);
  const DensityMatrix rho = random_density_matrix(2, rng);
  CHECK(max_abs_diff(apply_kraus(KrausSet({ComplexMatrix::identity(2)}), rho.matrix()), rho.matrix()) == 0.0);

  const double p = 0.3;
  const KrausSet ad = amplitude_damping(p);
  CHECK(ad.completeness_residual() <= 1e-15);
  const ComplexMatrix excited{{0.0, 0.0}, {0.0, 1.0}};
  const ComplexMatrix out = apply_kraus(ad, excited);
  CHECK(max_abs_diff(out, ComplexMatrix{{p, 0.0}, {0.0, 1.0 - p}}) < 1e-15);

  const TimeSeries s = propagate_kraus(ad, rho, 40);
  CHECK(s.steps() == 40);
  for (const auto& st : s.states()) CHECK(std::abs(trace(st.matrix()) - 1.0) <= 1e-10);
  CHECK_THROWS_AS(apply_kraus(ad, ComplexMatrix::identity(3)), Error);
}

TEST_CASE("completeness-satisfying random Kraus sets preserve trace") {
  // Build E_k = V_k from an isometry: stack random columns and orthonormalize
  // via the exact polar factor of a random matrix.
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2;
    const std::size_t l = 3;
    ComplexMatrix g(n * l, n);
    const ComplexMatrix blocks = random_ginibre(n * l, rng);
    for (std::size_t r = 0; r < n * l; ++r)
      for (std::size_t c = 0; c < n; ++c) g(r, c) = blocks(r, c);
    // V = G (G^dagger G)^{-1/2}
    const HermitianEigen e = eigh(dagger(g) * g);
    ComplexMatrix inv_root(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = 1.0 / std::sqrt(e.values[k]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv_root(i, j) += e.vectors(i, k) * s * std::conj(e.vectors(j, k));
    }
    const ComplexMatrix v = g * inv_root;
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < l; ++k) {
      ComplexMatrix ek(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ek(i, j) = v(k * n + i, j);
      ops.push_back(ek);
    }
    const KrausSet ks(ops);
    CHECK(ks.completeness_residual() <= 1e-12);
    const TimeSeries s = propagate_kraus(ks, random_density_matrix(n, rng), 100);
    for (const auto& st : s.states()) CHECK(std::abs(trace(st.matrix()) - 1.0) <= 1e-10);
  }
}

TEST_CASE("mix_noise") {
  Rng rng(31);
  const DensityMatrix rho0 = random_density_matrix(2, rng);
  const TimeSeries exact = propagate_lindblad(dephasing(0.2), rho0, 0.1, 10);

  Rng r0(1);
  const TimeSeries same = mix_noise(exact, 0.0, r0);
  for (std::size_t i = 0; i <= 10; ++i) CHECK(same[i] == exact[i]);

  Rng ra(2);
  Rng rb(2);
  const TimeSeries a = mix_noise(exact, 0.3, ra);
  const TimeSeries b = mix_noise(exact, 0.3, rb);
  for (std::size_t i = 0; i <= 10; ++i) {
    CHECK(a[i] == b[i]);
    const StateDefects d = state_defects(a[i].matrix());
    CHECK(d.trace_error <= 1e-12);
    CHECK(d.min_eigenvalue >= -1e-12);
  }

  // w = 0.5 against the same random draws is the arithmetic mean.
  Rng draws(3);
  std::vector<DensityMatrix> rand_states;
  for (std::size_t i = 0; i <= 10; ++i) rand_states.push_back(random_density_matrix(2, draws));
  Rng rc(3);
  const TimeSeries half = mix_noise(exact, 0.5, rc);
  for (std::size_t i = 0; i <= 10; ++i) {
    const ComplexMatrix mean = 0.5 * (exact[i].matrix() + rand_states[i].matrix());
    CHECK(max_abs_diff(half[i].matrix(), mean) < 1e-15);
  }

  Rng bad(4);
  CHECK_THROWS_AS(mix_noise(exact, 1.0, bad), Error);
  CHECK_THROWS_AS(mix_noise(exact, -0.1, bad), Error);
}

TEST_CASE("generate_data is deterministic and affine in w") {
  GenerateOptions opts;
  opts.seed = 99;
  opts.noise_weight = 0.1;
  const GeneratedData a = generate_data(opts);
  const GeneratedData b = generate_data(opts);
  for (std::size_t i = 0; i <= opts.steps; ++i) CHECK(a.noisy[i] == b.noisy[i]);
  CHECK(a.exact.steps() == 49);

  opts.noise_weight = 0.2;
  const GeneratedData c = generate_data(opts);
  for (std::size_t i = 0; i <= opts.steps; ++i) {
    CHECK(c.exact[i] == a.exact[i]);
    const ComplexMatrix d1 = a.noisy[i].matrix() - a.exact[i].matrix();
    const ComplexMatrix d2 = c.noisy[i].matrix() - c.exact[i].matrix();
    CHECK(max_abs_diff(d2, 2.0 * d1) < 1e-14);
  }
  opts.n = 1;
  CHECK_THROWS_AS(generate_data(opts), Error);
}

TEST_CASE("series files round-trip bit-exactly") {
  GenerateOptions opts;
  opts.seed = 5;
  opts.noise_weight = 0.05;
  const GeneratedData data = generate_data(opts);
  const auto path = (std::filesystem::temp_directory_path() / "qsid_series_roundtrip.json").string();
  write_series(path, data.noisy);
  const TimeSeries back = read_series(path);
  CHECK(back.dt() == data.noisy.dt());
  CHECK(back.metadata().seed == data.noisy.metadata().seed);
  CHECK(back.metadata().noise_weight == data.noisy.metadata().noise_weight);
  for (std::size_t i = 0; i <= back.steps(); ++i) CHECK(back[i] == data.noisy[i]);
  write_series(path + ".2", back);
  CHECK(read_text_file(path) == read_text_file(path + ".2"));

  Json doc = series_to_json(back);
  doc["version"] = 2;
  CHECK_THROWS_AS(series_from_json(doc), Error);
  doc = series_to_json(back);
  doc.erase("states");
  CHECK_THROWS_AS(series_from_json(doc), Error);
  CHECK_THROWS_AS(read_series(path + ".missing"), Error);
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".2");
}

TEST_CASE("time series validation") {
  const DensityMatrix a(ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}});
  CHECK_THROWS_AS(TimeSeries(0.1, {a}), Error);
  CHECK_THROWS_AS(TimeSeries(0.0, {a, a}), Error);
  const DensityMatrix b(ComplexMatrix{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
  CHECK_THROWS_AS(TimeSeries(0.1, {a, b}), Error);
}
