#include <doctest.h>

#include <cmath>

#include "resmono/linalg.hpp"
#include "resmono/states.hpp"

using namespace resmono;

namespace {

double pt_min(const Matrix& m, int da, int db) { return min_eigenvalue(partial_transpose(m, {da, db}, 1)); }

int numerical_rank(const Matrix& m) {
  RealVector ev = herm_eigenvalues(m);
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) r += ev(i) > 1e-10;
  return r;
}

}  // namespace

TEST_CASE("max_entangled") {
  DensityMatrix phi = max_entangled(2);
  const Matrix& m = phi.matrix();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
      CHECK(std::abs(m(i, j) - (corner ? 0.5 : 0.0)) < 1e-15);
    }
  CHECK(phi.purity() == doctest::Approx(1));
  for (int d = 2; d <= 5; ++d) {
    DensityMatrix p = max_entangled(d);
    CHECK((p.marginal({0}).matrix() - Matrix::Identity(d, d) / double(d)).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK_THROWS_AS(max_entangled(1), std::invalid_argument);
}

TEST_CASE("plus_state") {
  DensityMatrix p = plus_state();
  CHECK((p.matrix() - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(p.purity() == doctest::Approx(1));
}

TEST_CASE("isotropic family") {
  CHECK((isotropic(2, 1).matrix() - max_entangled(2).matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((isotropic(2, 0.25).matrix() - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(isotropic(2, 1.1), std::invalid_argument);

  // PPT boundary located by bisection on the partial-transpose spectrum.
  for (int d : {2, 3}) {
    double lo = 0, hi = 1;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pt_min(isotropic(d, mid).matrix(), d, d) >= 0 ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(1.0 / d).epsilon(1e-12));
  }
}

TEST_CASE("werner family") {
  for (int d : {2, 3}) {
    for (double p : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
      DensityMatrix w = werner(d, p);
      CHECK((swap_operator(d) * w.matrix()).trace().real() == doctest::Approx(p).epsilon(1e-13));
    }
  }
  // PPT iff Tr[F rho] >= 0.
  CHECK(pt_min(werner(2, 0.0).matrix(), 2, 2) > -1e-12);
  CHECK(pt_min(werner(2, -0.1).matrix(), 2, 2) < 0);
  CHECK_THROWS_AS(werner(2, -1.5), std::invalid_argument);
}

TEST_CASE("isotropic and werner are twirl invariant") {
  Rng rng(21);
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + k % 2;
    Matrix u = rng.haar_unitary(d);
    Matrix uu = kron(u, u);
    Matrix uuc = kron(u, Matrix(u.conjugate()));
    Matrix iso = isotropic(d, 0.7).matrix();
    Matrix wer = werner(d, -0.4).matrix();
    CHECK((uuc * iso * uuc.adjoint() - iso).norm() <= 1e-9);
    CHECK((uu * wer * uu.adjoint() - wer).norm() <= 1e-9);
  }
}

TEST_CASE("tiles state is PPT with rank 4 and is detected by realignment") {
  DensityMatrix t = tiles_upb();
  CHECK(pt_min(t.matrix(), 3, 3) >= -1e-10);
  CHECK(numerical_rank(t.matrix()) == 4);
  const double r = realignment_norm(t.matrix(), 3, 3);
  MESSAGE("realignment norm of tiles state: " << r);
  CHECK(r > 1.0);
  // Product and separable states never exceed 1.
  Rng rng(3);
  CHECK(realignment_norm(random_separable(3, 3, rng).matrix(), 3, 3) <= 1 + 1e-12);
}

TEST_CASE("random states are valid and deterministic") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    DensityMatrix a = random_density(4, seed);
    DensityMatrix b = random_density(4, seed);
    CHECK(a.matrix() == b.matrix());
    CHECK(std::abs(a.matrix().trace().real() - 1) < 1e-12);
    CHECK(min_eigenvalue(a.matrix()) >= -1e-12);
    DensityMatrix p = random_pure(3, seed);
    CHECK(p.purity() == doctest::Approx(1));
    CHECK(random_pure(3, seed).matrix() == p.matrix());
  }
  Rng rng(4);
  DensityMatrix low = random_density({2, 3}, rng, 2, {0});
  CHECK(numerical_rank(low.matrix()) == 2);
  Matrix u = random_local_unitary({2, 3}, 5);
  CHECK((u.adjoint() * u - Matrix::Identity(6, 6)).norm() < 1e-12);
  CHECK(random_local_unitary({2, 3}, 5) == u);
}

TEST_CASE("substreams are reproducible and distinct") {
  Rng parent(42);
  Rng c1 = parent.child(1), c1b = parent.child(1), c2 = parent.child(2);
  CHECK(c1.uniform() == c1b.uniform());
  CHECK(c1.seed() != c2.seed());
  CHECK(substream_seed(42, 7) == substream_seed(42, 7));
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("DensityMatrix validation and metadata") {
  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(2, 2)), std::invalid_argument);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(4, 4) / 4.0, {2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(4, 4) / 4.0, {2, 2}, {0, 1}), std::invalid_argument);

  Rng rng(6);
  DensityMatrix r = random_density({2, 3, 2}, rng, 0, {0, 2});
  Bipartition bp = r.bipartition();
  CHECK(bp.dim_a() == 4);
  CHECK(bp.dim_b() == 3);
  DensityMatrix two = r.as_two_party();
  CHECK(two.dims() == Dims{4, 3});
  CHECK((two.marginal({0}).matrix() - r.marginal({0, 2}).matrix()).cwiseAbs().maxCoeff() < 1e-14);

  DensityMatrix a = random_density({2}, rng), b = random_density({3}, rng);
  DensityMatrix ab = max_entangled(2).tensor(a.tensor(b));
  CHECK(ab.dims() == Dims{2, 2, 2, 3});
  CHECK(ab.cut() == std::vector<int>{0});
  CHECK_THROWS_AS(a.bipartition(), std::invalid_argument);
}
