#include <doctest.h>

#include <cmath>

#include "resmono/divergences.hpp"
#include "resmono/extension.hpp"

using namespace resmono;

namespace {

double mutual_info(const DensityMatrix& rho) {
  return vn_entropy(rho.marginal({0})) + vn_entropy(rho.marginal({1})) - vn_entropy(rho);
}

struct Mixture {
  DensityMatrix rho;
  Matrix flagged;  // sum_k p_k a_k (x) b_k (x) |k><k|_E, E of dimension 4
};

// Two-qubit mixture of `terms` random product pure states with classical flags.
Mixture flagged_separable(int terms, Rng& rng) {
  Matrix rho = Matrix::Zero(4, 4), flagged = Matrix::Zero(16, 16);
  std::vector<double> p(terms);
  double total = 0;
  for (double& x : p) total += (x = rng.uniform(0.2, 1.0));
  for (int k = 0; k < terms; ++k) {
    const Matrix prod = kron(random_pure({2}, rng).matrix(), random_pure({2}, rng).matrix()) * (p[k] / total);
    Matrix flag = Matrix::Zero(4, 4);
    flag(k, k) = 1;
    rho += prod;
    flagged += kron(prod, flag);
  }
  return {DensityMatrix(rho, {2, 2}, {0}), flagged};
}

void check_extension(const DensityMatrix& rho, const ExtensionBound& b, bool cemi) {
  CHECK(b.marginal_residual <= 1e-8);
  const std::vector<int> ab = cemi ? std::vector<int>{0, 2} : std::vector<int>{0, 1};
  CHECK((partial_trace(b.extension, b.dims, ab) - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-8);
  const double again = cemi ? cemi_value(b.extension, b.dims) : squashed_value(b.extension, b.dims);
  CHECK(again == doctest::Approx(b.value).epsilon(1e-12));
  CHECK(min_eigenvalue(b.extension) >= -1e-12);
}

}  // namespace

TEST_CASE("conditional mutual information") {
  Rng rng(2);
  const DensityMatrix ab = random_density({2, 2}, rng, 0, {0});
  const DensityMatrix e = random_density({3}, rng);
  CHECK(cond_mutual_info(kron(ab.matrix(), e.matrix()), {2, 2, 3}) == doctest::Approx(mutual_info(ab)).epsilon(1e-10));

  const Mixture m = flagged_separable(3, rng);
  CHECK(std::abs(cond_mutual_info(m.flagged, {2, 2, 4})) <= 1e-9);

  // GHZ: S(AE) = S(BE) = S(E) = 1, S(ABE) = 0.
  Vector ghz = Vector::Zero(8);
  ghz(0) = ghz(7) = 1 / std::sqrt(2.0);
  const Matrix g = ghz * ghz.adjoint();
  CHECK(cond_mutual_info(g, {2, 2, 2}) == doctest::Approx(1 + 1 - 0 - 1).epsilon(1e-10));

  for (int t = 0; t < 50; ++t) CHECK(cond_mutual_info(random_density({2, 2, 2}, rng).matrix(), {2, 2, 2}) >= -1e-9);
}

TEST_CASE("squashed upper bound") {
  const ExtensionBound phi = squashed_upper(max_entangled(2));
  CHECK(phi.value == doctest::Approx(1.0).epsilon(1e-6));
  check_extension(max_entangled(2), phi, false);

  Rng rng(4);
  const DensityMatrix psi = random_pure({2, 3}, rng, {0});
  const ExtensionBound pb = squashed_upper(psi, {{2}, 0, 2, 3});
  CHECK(std::abs(pb.value - vn_entropy(psi.marginal({0}))) <= 1e-6);

  for (int terms : {2, 4}) {
    const Mixture m = flagged_separable(terms, rng);
    const ExtensionBound b = squashed_upper(m.rho, {{4}, 0, 8, 11});
    CHECK(b.value <= 1e-3);
    check_extension(m.rho, b, false);
  }

  const DensityMatrix iso = isotropic(2, 0.9);
  const ExtensionBound s1 = squashed_upper(iso, {{4}, 0, 4, 1});
  const ExtensionBound s2 = squashed_upper(iso, {{4}, 0, 4, 2});
  for (const ExtensionBound* s : {&s1, &s2}) {
    CHECK(s->value > 0.0);
    CHECK(s->value < 1.0);
    check_extension(iso, *s, false);
  }
  MESSAGE("isotropic(2, 0.9) squashed upper: seed 1 " << s1.value << ", seed 2 " << s2.value);
  CHECK(std::abs(s1.value - s2.value) <= 0.05);
}

TEST_CASE("cemi upper bound") {
  const ExtensionBound phi = cemi_upper(max_entangled(2), {{2, 2}});
  CHECK(phi.value == doctest::Approx(1.0).epsilon(1e-6));
  check_extension(max_entangled(2), phi, true);

  Rng rng(6);
  const Mixture m = flagged_separable(2, rng);
  const ExtensionBound b = cemi_upper(m.rho, {{2, 2}, 0, 8, 13});
  CHECK(b.value <= 1e-3);
  check_extension(m.rho, b, true);
}

TEST_CASE("sandwich record") {
  const SandwichRecord phi = check_sandwich(max_entangled(2));
  CHECK(phi.squashed.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(phi.cemi.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(phi.consistent);
  CHECK(std::string(phi.status()) == "consistent");

  Rng rng(8);
  const Mixture m = flagged_separable(2, rng);
  const SandwichRecord sep = check_sandwich(m.rho);
  CHECK(sep.squashed.value <= 1e-3);
  CHECK(sep.cemi.value <= 1e-3);

  const SandwichRecord r = check_sandwich(random_density({2, 2}, rng, 0, {0}), {{4}, 0, 2, 1}, {{2, 2}, 0, 2, 1});
  CHECK(r.squashed.value >= -1e-9);
  CHECK(r.cemi.value >= -1e-9);
  MESSAGE("random two-qubit: squashed " << r.squashed.value << ", cemi " << r.cemi.value << ", " << std::string(r.status()));
}
