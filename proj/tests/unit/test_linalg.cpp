#include <doctest.h>

#include <cmath>

#include "resmono/linalg.hpp"
#include "resmono/rng.hpp"
#include "resmono/states.hpp"

using namespace resmono;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Random density matrix with every eigenvalue at least `floor`.
Matrix well_conditioned(int d, Rng& rng, double floor) {
  Matrix g = rng.ginibre(d, d);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return (1 - d * floor) * m + floor * Matrix::Identity(d, d);
}

double tr_rho_log_sigma(const Matrix& rho, const Matrix& sigma) {
  return inner(rho, matrix_fn(sigma, MatrixFunction::kLog2));
}

}  // namespace

TEST_CASE("herm_eig on closed-form cases") {
  HermEig e = herm_eig(diag2(1, 2));
  CHECK(e.values(0) == doctest::Approx(1));
  CHECK(e.values(1) == doctest::Approx(2));
  CHECK(max_abs(e.vectors.cwiseAbs().cast<Complex>() - Matrix::Identity(2, 2)) < 1e-14);

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  e = herm_eig(x);
  CHECK(e.values(0) == doctest::Approx(-1));
  CHECK(e.values(1) == doctest::Approx(1));
  // Eigenvectors are Hadamard columns up to phase.
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) CHECK(std::abs(e.vectors(i, j)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(e.vectors.col(0).dot(Vector(Eigen::Vector2cd(1, -1)))) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  Rng rng(7);
  Matrix m = random_hermitian(6, rng);
  HermEig e = herm_eig(m);
  CHECK((e.reconstruct() - m).norm() <= 1e-10 * m.norm());
  CHECK((e.vectors.adjoint() * e.vectors - Matrix::Identity(6, 6)).norm() <= 1e-10);
  for (int i = 1; i < 6; ++i) CHECK(e.values(i - 1) <= e.values(i));
  CHECK_FALSE(e.symmetrization_warning());

  for (int d : {1, 3, 9, 16, 30}) {
    Matrix h = random_hermitian(d, rng);
    CHECK((herm_eig(h).reconstruct() - h).norm() <= 1e-10 * h.norm());
  }
}

TEST_CASE("herm_eig flags asymmetric input and rejects non-square") {
  Matrix m = diag2(1, 2);
  m(0, 1) = 1e-6;
  CHECK(herm_eig(m).symmetrization_warning());
  CHECK_THROWS_AS(herm_eig(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("matrix_fn examples") {
  CHECK(max_abs(matrix_fn(Matrix::Identity(2, 2) / 2.0, MatrixFunction::kLog2) + Matrix::Identity(2, 2)) < 1e-14);
  CHECK(max_abs(matrix_fn(diag2(1, 4), MatrixFunction::kLog2) - diag2(0, 2)) < 1e-14);
  CHECK(max_abs(matrix_fn(diag2(0.5, 0.5), MatrixFunction::kXLog2X) - diag2(-0.5, -0.5)) < 1e-14);
  CHECK(max_abs(matrix_fn(diag2(0, 1), MatrixFunction::kXLog2X)) < 1e-14);
  CHECK(max_abs(matrix_fn(diag2(1, 3), MatrixFunction::kExp2) - diag2(2, 8)) < 1e-13);
  CHECK_THROWS_AS(matrix_fn(diag2(0, 1), MatrixFunction::kLog2), std::domain_error);
  CHECK_THROWS_AS(matrix_fn(diag2(-1e-3, 1), MatrixFunction::kXLog2X), std::domain_error);
}

TEST_CASE("log_gradient closed forms") {
  const double ln2 = std::log(2.0);
  for (int d : {2, 3, 4}) {
    Matrix id = Matrix::Identity(d, d) / static_cast<double>(d);
    Matrix g = log_gradient(id, id);
    CHECK(max_abs(g - Matrix::Identity(d, d) / ln2) < 1e-12);
  }
  Matrix rho = diag2(0.3, 0.7), sigma = diag2(0.6, 0.4);
  Matrix expect = diag2(0.3 / 0.6, 0.7 / 0.4) / ln2;
  CHECK(max_abs(log_gradient(rho, sigma) - expect) < 1e-12);
  CHECK_THROWS_AS(log_gradient(rho, diag2(1, 0)), std::domain_error);
}

TEST_CASE("log_gradient matches central finite differences") {
  const double h = 1e-5;
  for (std::uint64_t seed : {3ULL, 4ULL, 5ULL, 6ULL, 7ULL}) {
    Rng rng(seed);
    const int d = 4;
    Matrix rho = well_conditioned(d, rng, 0.0);
    Matrix sigma = well_conditioned(d, rng, 0.05);
    Matrix g = log_gradient(rho, sigma);
    for (int k = 0; k < 5; ++k) {
      Matrix delta = random_hermitian(d, rng);
      delta /= delta.norm();
      const double fd = (tr_rho_log_sigma(rho, sigma + h * delta) - tr_rho_log_sigma(rho, sigma - h * delta)) / (2 * h);
      CHECK(std::abs(inner(g, delta) - fd) < 1e-6);
    }
  }
}

TEST_CASE("log_gradient with nearly degenerate spectrum") {
  Matrix sigma = diag2(0.5 + 1e-13, 0.5 - 1e-13);
  Matrix rho(2, 2);
  rho << 0.5, 0.2, 0.2, 0.5;
  Matrix g = log_gradient(rho, sigma);
  CHECK(max_abs(g - 2.0 * rho / std::log(2.0)) < 1e-9);
}

TEST_CASE("partial_trace examples and trace preservation") {
  Matrix phi = max_entangled(2).matrix();
  CHECK(max_abs(partial_trace(phi, {2, 2}, {0}) - Matrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(max_abs(partial_trace(phi, {2, 2}, {1}) - Matrix::Identity(2, 2) / 2.0) < 1e-15);

  Rng rng(5);
  Matrix rho = random_density({2}, rng).matrix();
  Matrix tau = random_density({3}, rng).matrix();
  CHECK(max_abs(partial_trace(kron(rho, tau), {2, 3}, {0}) - rho) < 1e-12);
  CHECK(max_abs(partial_trace(kron(rho, tau), {2, 3}, {1}) - tau) < 1e-12);

  Matrix t = random_density({2, 3, 2}, rng).matrix();
  for (const auto& keep : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}, {}}) {
    CHECK(std::abs(partial_trace(t, {2, 3, 2}, keep).trace() - t.trace()) < 1e-12);
  }
  CHECK_THROWS_AS(partial_trace(t, {2, 2}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(t, {2, 3, 2}, {3}), std::invalid_argument);
}

TEST_CASE("partial_trace of a three-party product keeps relative order") {
  Rng rng(8);
  Matrix a = random_density({2}, rng).matrix();
  Matrix b = random_density({3}, rng).matrix();
  Matrix c = random_density({2}, rng).matrix();
  Matrix abc = kron(kron(a, b), c);
  CHECK(max_abs(partial_trace(abc, {2, 3, 2}, {0, 2}) - kron(a, c)) < 1e-12);
  CHECK(max_abs(partial_trace(abc, {2, 3, 2}, {2, 0}) - kron(a, c)) < 1e-12);
}

TEST_CASE("partial_transpose examples") {
  Matrix phi = max_entangled(2).matrix();
  RealVector ev = herm_eigenvalues(partial_transpose(phi, {2, 2}, 1));
  CHECK(ev(0) == doctest::Approx(-0.5));
  for (int i = 1; i < 4; ++i) CHECK(ev(i) == doctest::Approx(0.5));

  Rng rng(1);
  Matrix rho = random_density({2}, rng).matrix();
  Matrix tau = random_density({3}, rng).matrix();
  CHECK(max_abs(partial_transpose(kron(rho, tau), {2, 3}, 1) - kron(rho, tau.transpose())) < 1e-15);
  CHECK(max_abs(partial_transpose(kron(rho, tau), {2, 3}, 0) - kron(rho.transpose(), tau)) < 1e-15);

  Rng rng9(9);
  Matrix m = random_hermitian(9, rng9);
  CHECK(partial_transpose(partial_transpose(m, {3, 3}, 1), {3, 3}, 1) == m);
  CHECK_THROWS_AS(partial_transpose(m, {2, 3}, 1), std::invalid_argument);
}

TEST_CASE("partial_transpose is a trace- and Hermiticity-preserving linear involution") {
  Rng rng(11);
  for (auto [da, db] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
    for (int k = 0; k < 100; ++k) {
      Matrix a = random_hermitian(da * db, rng);
      Matrix b = random_hermitian(da * db, rng);
      const double s = rng.normal();
      Matrix ta = partial_transpose(a, {da, db}, 1);
      CHECK(partial_transpose(ta, {da, db}, 1) == a);
      CHECK(std::abs(ta.trace() - a.trace()) < 1e-13);
      CHECK(max_abs(ta - ta.adjoint()) < 1e-15);
      Matrix lin = partial_transpose(Matrix(a + s * b), {da, db}, 1) - ta - s * partial_transpose(b, {da, db}, 1);
      CHECK(max_abs(lin) < 1e-13);
      CHECK(std::abs(ta.norm() - a.norm()) < 1e-12);
    }
  }
}

TEST_CASE("permute_subsystems swaps Kronecker factors") {
  Rng rng(2);
  Matrix a = random_hermitian(2, rng), b = random_hermitian(3, rng), c = random_hermitian(4, rng);
  Matrix abc = kron(kron(a, b), c);
  CHECK(max_abs(permute_subsystems(abc, {2, 3, 4}, {2, 0, 1}) - kron(kron(c, a), b)) < 1e-14);
  Vector u = rng.haar_vector(2), v = rng.haar_vector(3);
  CHECK((permute_subsystems(kron(u, v), {2, 3}, {1, 0}) - kron(v, u)).norm() < 1e-15);
  CHECK_THROWS_AS(permute_subsystems(abc, {2, 3, 4}, {0, 0, 1}), std::invalid_argument);
}

TEST_CASE("trace_norm and frobenius") {
  CHECK(trace_norm(diag2(1, -1)) == doctest::Approx(2));
  Matrix rho = max_entangled(2).matrix();
  CHECK(trace_norm(rho - rho) == 0.0);
  CHECK(0.5 * trace_norm(rho - Matrix::Identity(4, 4) / 4.0) == doctest::Approx(0.75).epsilon(1e-14));
  Matrix nonherm(2, 2);
  nonherm << 0, 2, 0, 0;
  CHECK(trace_norm(nonherm) == doctest::Approx(2));
  CHECK(frobenius(diag2(3, 4)) == doctest::Approx(5));
}

TEST_CASE("partial_trace of a product with unit-trace factor returns the first factor") {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    Matrix rho = random_hermitian(3, rng);
    Matrix tau = random_density({2}, rng).matrix();
    CHECK(max_abs(partial_trace(kron(rho, tau), {3, 2}, {0}) - rho) < 1e-12);
  }
}
