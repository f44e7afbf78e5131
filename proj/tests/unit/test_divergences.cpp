#include <doctest.h>

#include <cmath>
#include <limits>

#include "resmono/divergences.hpp"
#include "resmono/measurement.hpp"
#include "resmono/states.hpp"

using namespace resmono;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(v.size(), v.size());
  int i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

ProbVector random_prob(int n, Rng& rng) {
  std::vector<double> p(n);
  double s = 0;
  for (double& x : p) s += (x = -std::log(1 - rng.uniform()));
  for (double& x : p) x /= s;
  return ProbVector::normalized(p);
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  Rng rng(1);
  CHECK(vn_entropy(random_pure({3}, rng)) == doctest::Approx(0).epsilon(1e-12));
  for (int d = 2; d <= 6; ++d) CHECK(vn_entropy(Matrix(Matrix::Identity(d, d) / double(d))) == doctest::Approx(std::log2(d)));
  CHECK(vn_entropy(diag({0.25, 0.75})) == doctest::Approx(0.8112781244591328).epsilon(1e-14));
}

TEST_CASE("umegaki relative entropy") {
  Rng rng(2);
  DensityMatrix r = random_density({3}, rng);
  CHECK(umegaki(r, r).value == doctest::Approx(0).epsilon(1e-12));
  DivergenceValue v = umegaki(max_entangled(2).matrix(), Matrix(Matrix::Identity(4, 4) / 4.0));
  CHECK_FALSE(v.infinite);
  CHECK(v.value == doctest::Approx(2));
  CHECK(umegaki(diag({1, 0}), diag({0, 1})).infinite);
  CHECK(umegaki(diag({1, 0}), diag({0.5, 0.5})).value == doctest::Approx(1));
  CHECK(std::isinf(umegaki(diag({1, 0}), diag({0, 1})).as_double()));
  CHECK_THROWS_AS(umegaki(diag({1, 0}), diag({1, 0, 0})), std::invalid_argument);
}

TEST_CASE("classical divergences and scalar helpers") {
  ProbVector p({0.3, 0.7});
  CHECK(kl(p, p).value == 0.0);
  CHECK(kl(ProbVector({1, 0}), ProbVector({0.5, 0.5})).value == doctest::Approx(1));
  CHECK(kl(ProbVector({1, 0}), ProbVector({0, 1})).infinite);

  for (int d = 2; d <= 5; ++d) {
    CHECK(std::abs(binary_d2(1, 2.0 / (d + 1)) - (std::log2(d + 1) - 1)) <= 1e-12);
  }
  CHECK(binary_d2(1, 2.0 / 3) == doctest::Approx(0.584962500721156).epsilon(1e-14));
  CHECK(binary_d2(0.3, 0.3) == 0.0);
  CHECK(binary_d2(1, 0.5) == doctest::Approx(1));
  CHECK_THROWS_AS(binary_d2(0.5, 0), std::domain_error);
  CHECK_THROWS_AS(binary_d2(1.5, 0.5), std::domain_error);

  CHECK(g_fn(0) == 0.0);
  CHECK(g_fn(1) == doctest::Approx(2));
  CHECK(h2(0.5) == doctest::Approx(1));
  CHECK_THROWS_AS(g_fn(-0.1), std::domain_error);
  CHECK_THROWS_AS(h2(1.1), std::domain_error);
}

TEST_CASE("g and h2 against high-precision references") {
  struct Ref { double x, g, h; };
  // 30-digit reference evaluations.
  const Ref refs[] = {
      {0.001, 0.011409200432742473951, 0.011407757737461135718},
      {0.01, 0.080937407804587988803, 0.080793135895911172825},
      {0.05, 0.29000519903033595547, 0.28639695711595612877},
      {0.1, 0.48344668561366463395, 0.46899559358928122125},
      {0.2, 0.78002690597802506987, 0.72192809488736234787},
      {0.3, 1.0131547884797106062, 0.88129089923069261822},
      {0.5, 1.3774437510817342722, 1.0},
      {0.75, 1.7241492380599400519, 0.81127812445913286391},
      {1, 2.0, 0.0},
      {0.123, 0.55980513570706156208, 0.53792323105132965243},
      {0.999, 1.9989996391457976335, 0.011407757737461135718},
      {0.4, 1.2083687959932834025, 0.970950594454668639},
      {0.6, 1.5270944046799439433, 0.970950594454668639},
      {0.9, 1.8962016793573689637, 0.46899559358928122125},
  };
  for (const Ref& r : refs) {
    CHECK(std::abs(g_fn(r.x) - r.g) <= 1e-12);
    CHECK(std::abs(h2(r.x) - r.h) <= 1e-12);
  }
  const Ref g_only[] = {{1.5, 2.4273764861366715975, 0}, {2, 2.7548875021634685444, 0},
                        {3, 3.2451124978365314556, 0},   {5, 3.9001345298901253494, 0},
                        {7.5, 4.4417546835639960002, 0}, {10, 4.8344668561366463395, 0}};
  for (const Ref& r : g_only) CHECK(std::abs(g_fn(r.x) - r.g) <= 1e-12);
}

TEST_CASE("g is increasing") {
  double prev = 0;
  for (int i = 1; i <= 200; ++i) {
    const double v = g_fn(i * 0.05);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("trace distance") {
  Rng rng(3);
  DensityMatrix r = random_density({3}, rng);
  CHECK(trace_distance(r, r) == 0.0);
  CHECK(trace_distance(diag({1, 0}), diag({0, 1})) == doctest::Approx(1));
  DensityMatrix a = random_density({3}, rng), b = random_density({3}, rng);
  CHECK(trace_distance(a, b) == doctest::Approx(trace_distance(b, a)));
  CHECK(trace_distance(a, b) <= trace_distance(a, r) + trace_distance(r, b) + 1e-14);
}

TEST_CASE("scalar Pinsker inequality") {
  Rng rng(4);
  for (int k = 0; k < 500; ++k) {
    const int n = 2 + k % 5;
    ProbVector p = random_prob(n, rng), q = random_prob(n, rng);
    double l1 = 0;
    for (int i = 0; i < n; ++i) l1 += std::abs(p[i] - q[i]);
    CHECK(kl(p, q).value >= l1 * l1 / (2 * std::log(2.0)) - 1e-14);
  }
}

TEST_CASE("classical-quantum chain identity") {
  SUBCASE("single block reduces to umegaki") {
    Rng rng(5);
    Matrix r = random_density({2}, rng).matrix(), s = random_density({2}, rng).matrix();
    CHECK(cq_chain_identity_check(ProbVector({1.0}), {r}, ProbVector({1.0}), {s}) <= 1e-12);
  }
  SUBCASE("equal ensembles") {
    Rng rng(6);
    std::vector<Matrix> r{random_density({2}, rng).matrix(), random_density({2}, rng).matrix()};
    ProbVector p({0.4, 0.6});
    CHECK(cq_chain_identity_check(p, r, p, r) <= 1e-12);
  }
  SUBCASE("random qubit ensembles") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
      const int n = 1 + k % 4;
      const int d = 2 + k % 3;
      std::vector<Matrix> r, s;
      for (int x = 0; x < n; ++x) {
        r.push_back(random_density({d}, rng).matrix());
        s.push_back(random_density({d}, rng).matrix());
      }
      CHECK(cq_chain_identity_check(random_prob(n, rng), r, random_prob(n, rng), s) <= 1e-9);
    }
  }
  SUBCASE("support violation on both sides") {
    std::vector<Matrix> r{diag({1, 0})}, s{diag({0, 1})};
    CHECK(cq_chain_identity_check(ProbVector({1.0}), r, ProbVector({1.0}), s) == 0.0);
  }
}

TEST_CASE("detection measurement") {
  for (int d = 2; d <= 5; ++d) {
    Povm e = detection_measurement(d);
    CHECK(inner(e.effects[0], max_entangled(d).matrix()) == doctest::Approx(1));
    CHECK(inner(e.effects[0], Matrix(Matrix::Identity(d * d, d * d) / double(d * d))) == doctest::Approx(1.0 / d));
    const Matrix phi = max_entangled(d).matrix();
    const Matrix id = Matrix::Identity(d * d, d * d);
    Matrix star = phi / double(d) + (double(d - 1) / d) * (id - phi) / double(d * d - 1);
    CHECK(inner(e.effects[0], star) == doctest::Approx(2.0 / (d + 1)).epsilon(1e-13));
  }
}

TEST_CASE("MUB detection effects sum to identity plus d Phi") {
  for (int d : {2, 3, 4, 5}) {
    const std::vector<Matrix> bases = mutually_unbiased_bases(d);
    REQUIRE(bases.size() == static_cast<std::size_t>(d + 1));
    for (std::size_t a = 0; a < bases.size(); ++a) {
      CHECK((bases[a].adjoint() * bases[a] - Matrix::Identity(d, d)).norm() < 1e-12);
      for (std::size_t b = a + 1; b < bases.size(); ++b) {
        Matrix o = bases[a].adjoint() * bases[b];
        CHECK((o.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff() < 1e-12);
      }
    }
    Matrix sum = Matrix::Zero(d * d, d * d);
    for (const Povm& p : mub_detection(d)) sum += p.effects[0];
    Matrix expect = Matrix::Identity(d * d, d * d) + d * max_entangled(d).matrix();
    CHECK((sum - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_FALSE(has_mub_construction(6));
  CHECK_THROWS_AS(mutually_unbiased_bases(6), std::invalid_argument);
}

TEST_CASE("default families are valid PPT measurement families") {
  for (const Bipartition& cut : {Bipartition::two_party(2, 2), Bipartition::two_party(2, 3),
                                 Bipartition::two_party(3, 3), Bipartition{{2, 2, 2, 2}, {0, 1}}}) {
    MeasurementFamily f = default_family(cut, 3, 17);
    CHECK_NOTHROW(f.validate());
    CHECK(f.povms.size() >= 4);
  }
  MeasurementFamily a = default_family(Bipartition::two_party(2, 2), 2, 5);
  MeasurementFamily b = default_family(Bipartition::two_party(2, 2), 2, 5);
  CHECK(a.povms.back().effects[0] == b.povms.back().effects[0]);
  MeasurementFamily bad = a;
  bad.povms[0].effects[0] *= 2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("measured divergences obey data processing") {
  Rng rng(13);
  for (int k = 0; k < 500; ++k) {
    const int da = 2, db = 1 + k % 2;
    Bipartition cut = Bipartition::two_party(da, db);
    Matrix r = random_density({da, db}, rng).matrix();
    Matrix s = random_density({da, db}, rng).matrix();
    MeasurementFamily f = default_family(cut, 1, rng.below(1000));
    const double d = umegaki(r, s).value;
    for (const Povm& m : f.povms) CHECK(kl(m.probabilities(r), m.probabilities(s)).value <= d + 1e-9);
  }
}

TEST_CASE("family norm") {
  MeasurementFamily f = default_family(Bipartition::two_party(2, 2), 2, 1);
  CHECK(family_norm(Matrix::Zero(4, 4), f) == 0.0);
  MeasurementFamily comp;
  comp.cut = {{2}, {}};
  comp.povms.push_back(computational_measurement(comp.cut));
  CHECK(family_norm(diag({1, -1}), comp) == doctest::Approx(2));
  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    Matrix x = random_hermitian(4, rng);
    CHECK(family_norm(x, f) <= trace_norm(x) + 1e-12);
  }
}
