#include <doctest.h>

#include <cmath>

#include "resmono/cones.hpp"
#include "resmono/sdp.hpp"
#include "resmono/states.hpp"

using namespace resmono;

namespace {

SdpProblem::Adjoint trace_adjoint(int n) {
  return [n](const Matrix& e) { return Matrix(e(0, 0) * Matrix::Identity(n, n)); };
}

// max <C, X> over density matrices, optionally also requiring X^Gamma >= 0.
SdpProblem density_problem(const Matrix& c, const Bipartition* cut) {
  SdpProblem p;
  const int n = static_cast<int>(c.rows());
  const int x = p.add_block(n, "X");
  p.add_psd(x);
  if (cut) p.add_cone_row({"X^G>=0", {{x, 1.0}}, {cut->dims, cut->side_b()}});
  p.add_equality({{x, trace_adjoint(n)}}, Matrix::Identity(1, 1));
  p.add_objective(x, c);
  p.add_trace_bound({x}, 1.0);
  return p;
}

}  // namespace

TEST_CASE("Hermitian vectorization is an isometry") {
  Rng rng(1);
  for (int n : {1, 2, 5}) {
    Matrix a = random_hermitian(n, rng), b = random_hermitian(n, rng);
    RealVector va = herm_to_vec(a), vb = herm_to_vec(b);
    CHECK(va.size() == n * n);
    CHECK((vec_to_herm(va, n) - a).norm() < 1e-14);
    CHECK(va.dot(vb) == doctest::Approx(inner(a, b)).epsilon(1e-13));
  }
}

TEST_CASE("trivial feasibility: any density matrix") {
  SdpProblem p = density_problem(Matrix::Zero(3, 3), nullptr);
  SdpSolution s = admm_sdp(p);
  CHECK(s.converged);
  CHECK(std::abs(s.x[0].trace().real() - 1) < 1e-8);
  CHECK(min_eigenvalue(s.x[0]) > -1e-6);
  CHECK(s.upper == doctest::Approx(0).epsilon(1e-6));
}

TEST_CASE("largest eigenvalue as an SDP") {
  Rng rng(2);
  Matrix c = random_hermitian(5, rng);
  SdpSolution s = admm_sdp(density_problem(c, nullptr));
  CHECK(s.converged);
  CHECK(s.primal_objective == doctest::Approx(max_eigenvalue(c)).epsilon(1e-5));
  CHECK(s.upper >= max_eigenvalue(c) - 1e-9);
  CHECK(s.upper <= max_eigenvalue(c) + 1e-4);
}

TEST_CASE("max overlap of a PPT state with Phi_2 matches the LMO") {
  const Bipartition cut = Bipartition::two_party(2, 2);
  const Matrix phi = max_entangled(2).matrix();
  SdpProblem p = density_problem(phi, &cut);
  SdpSolution s = admm_sdp(p);
  CHECK(s.converged);
  CHECK(s.primal_objective == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(s.upper >= 0.5 - 1e-9);
  CHECK(s.upper <= 0.5 + 1e-4);
  LmoResult l = lmo_ppt(-phi, cut);
  CHECK(-l.objective == doctest::Approx(s.primal_objective).epsilon(1e-4));
  // The certificate is reproducible from the problem data alone.
  CHECK(certified_upper_bound(p, s.y, s.dual_cones) == doctest::Approx(s.upper).epsilon(1e-12));
}

TEST_CASE("inconsistent equalities are flagged") {
  SdpProblem p;
  const int x = p.add_block(2);
  p.add_psd(x);
  p.add_equality({{x, trace_adjoint(2)}}, Matrix::Identity(1, 1));
  p.add_equality({{x, trace_adjoint(2)}}, 2.0 * Matrix::Identity(1, 1));
  SdpSolution s = admm_sdp(p);
  CHECK(s.infeasible);
  CHECK_FALSE(s.converged);
}

TEST_CASE("cone-infeasible problem is not reported as converged") {
  // X >= 0 with Tr X = -1.
  SdpProblem p;
  const int x = p.add_block(2);
  p.add_psd(x);
  p.add_equality({{x, trace_adjoint(2)}}, -Matrix::Identity(1, 1));
  SdpOptions o;
  o.max_iter = 2000;
  SdpSolution s = admm_sdp(p, o);
  CHECK_FALSE(s.converged);
}

TEST_CASE("blocks outside the cone rows are rejected") {
  SdpProblem p;
  p.add_block(2);
  CHECK_THROWS_AS(admm_sdp(p), std::invalid_argument);
}
