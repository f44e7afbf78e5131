#include <doctest.h>

#include <chrono>
#include <cmath>

#include "resmono/divergences.hpp"
#include "resmono/ree.hpp"

using namespace resmono;

namespace {

// Minimum of D(rho || isotropic(d, p)) over PPT isotropic states, by golden
// section on p in (0, 1/d]. For twirl-invariant rho this is the PPT
// relative entropy.
double isotropic_line_oracle(const DensityMatrix& rho, int d) {
  auto f = [&](double p) { return umegaki(rho.matrix(), isotropic(d, p).matrix()).as_double(); };
  double lo = 1e-9, hi = 1.0 / d;
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < 200; ++k) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({f1, f2, f(1.0 / d)});
}

// (A, B) (x) (A', B') reordered to (A, A', B, B') with cut {A, A'}.
DensityMatrix pair_state(const DensityMatrix& ab, const DensityMatrix& a2b2) {
  const DensityMatrix t = ab.tensor(a2b2);
  return DensityMatrix(permute_subsystems(t.matrix(), t.dims(), {0, 2, 1, 3}), {ab.dims()[0], a2b2.dims()[0], ab.dims()[1], a2b2.dims()[1]},
                       {0, 1});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_interval(const DensityMatrix& rho, const BoundInterval& b) {
  CHECK(b.lower >= -1e-9);
  CHECK(b.lower <= b.upper + 1e-9);
  CHECK(ree_certificate_upper(rho, b.upper_certificate) == doctest::Approx(b.upper).epsilon(1e-9));
  if (!b.certificate.empty()) CHECK(ree_certificate_lower(rho, b.certificate) >= b.lower - 1e-9);
  for (std::size_t i = 1; i < b.upper_history.size(); ++i) CHECK(b.upper_history[i] <= b.upper_history[i - 1]);
}

}  // namespace

TEST_CASE("ree_ppt of Phi_d matches the isotropic-line oracle") {
  for (int d : {2, 3}) {
    const DensityMatrix phi = max_entangled(d);
    const double oracle = isotropic_line_oracle(phi, d);
    CHECK(oracle == doctest::Approx(std::log2(d)).epsilon(1e-9));
    const auto t0 = std::chrono::steady_clock::now();
    BoundInterval b = ree_ppt(phi);
    MESSAGE("d=" << d << " [" << b.lower << ", " << b.upper << "] fw=" << b.iterations << " newton=" << b.newton_steps
                 << " " << seconds_since(t0) << "s");
    check_interval(phi, b);
    CHECK(b.contains(oracle, 1e-9));
    CHECK(b.width() <= 1e-3);
  }
}

TEST_CASE("ree_ppt of isotropic states matches the oracle") {
  for (double p : {0.6, 0.8, 0.95}) {
    const DensityMatrix rho = isotropic(2, p);
    const double oracle = isotropic_line_oracle(rho, 2);
    BoundInterval b = ree_ppt(rho);
    check_interval(rho, b);
    CHECK(b.contains(oracle, 1e-8));
    CHECK(b.width() <= 1e-5);
  }
}

TEST_CASE("ree_ppt vanishes on PPT states") {
  Rng rng(11);
  const Bipartition cut = Bipartition::two_party(2, 2);
  for (int k = 0; k < 100; ++k) {
    DensityMatrix s = k % 2 ? random_separable(2, 2, rng)
                            : DensityMatrix(ppt_mix_fix(random_density({2, 2}, rng, 2).matrix(), cut), {2, 2}, {0});
    BoundInterval b = ree_ppt(s);
    CHECK(b.upper <= 1e-6);
    CHECK(b.lower == 0.0);
  }
  BoundInterval t = ree_ppt(tiles_upb());
  CHECK(t.upper <= 1e-6);
}

TEST_CASE("ree_ppt on random entangled states: certificates and feasible-point bounds") {
  Rng rng(12);
  int narrow = 0, total = 0;
  double worst = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < 20; ++k) {
    const Dims dims = k % 2 ? Dims{2, 3} : Dims{2, 2};
    DensityMatrix rho = random_density(dims, rng, 1 + k % 3, {0});
    if (is_ppt(rho)) continue;
    ++total;
    BoundInterval b = ree_ppt(rho);
    check_interval(rho, b);
    worst = std::max(worst, b.width());
    narrow += b.width() <= 1e-6;
    // Lower bound below the value at every feasible point.
    for (int j = 0; j < 20; ++j) {
      DensityMatrix s = random_separable(dims[0], dims[1], rng);
      CHECK(b.lower <= umegaki(rho, s).as_double() + 1e-9);
    }
    const Matrix dk = dykstra_ppt_density(rho.matrix(), rho.bipartition()).point.matrix();
    CHECK(b.lower <= umegaki(rho.matrix(), dk).as_double() + 1e-9);
  }
  MESSAGE(narrow << "/" << total << " within 1e-6, worst width " << worst << ", " << seconds_since(t0) << "s");
  CHECK(narrow == total);
}

TEST_CASE("ree_ppt is invariant under local unitaries") {
  Rng rng(13);
  DensityMatrix rho = random_density({2, 2}, rng, 2, {0});
  while (is_ppt(rho)) rho = random_density({2, 2}, rng, 2, {0});
  Matrix u = kron(rng.haar_unitary(2), rng.haar_unitary(2));
  DensityMatrix r2(u * rho.matrix() * u.adjoint(), {2, 2}, {0});
  BoundInterval a = ree_ppt(rho), b = ree_ppt(r2);
  CHECK(a.lower <= b.upper + 1e-9);
  CHECK(b.lower <= a.upper + 1e-9);
}

TEST_CASE("regularized estimate") {
  SUBCASE("n = 1 equals ree_ppt") {
    BoundInterval a = regularized_ree_estimate(max_entangled(2), 1);
    BoundInterval b = ree_ppt(max_entangled(2));
    CHECK(a.upper == doctest::Approx(b.upper).epsilon(1e-12));
  }
  SUBCASE("Phi_2 with two copies") {
    const auto t0 = std::chrono::steady_clock::now();
    BoundInterval b = regularized_ree_estimate(max_entangled(2), 2);
    MESSAGE("[" << b.lower << ", " << b.upper << "] " << seconds_since(t0) << "s");
    CHECK(b.contains(1.0, 2e-3));
    CHECK(b.width() <= 2e-3);
  }
  SUBCASE("per-copy uppers do not increase") {
    Rng rng(14);
    for (int k = 0; k < 5; ++k) {
      DensityMatrix rho = random_density({2, 2}, rng, 2, {0});
      auto seq = regularized_ree_sequence(rho, 2);
      CHECK(seq[1].upper <= seq[0].upper + 1e-12);
    }
  }
  SUBCASE("resource guard") { CHECK_THROWS_AS(regularized_ree_estimate(max_entangled(3), 3), std::invalid_argument); }
}

TEST_CASE("measured_ree normalization on Phi_d") {
  for (int d = 2; d <= 5; ++d) {
    const Bipartition cut = Bipartition::two_party(d, d);
    const MeasurementFamily fam = default_family(cut, 2, 100 + d);
    const auto t0 = std::chrono::steady_clock::now();
    BoundInterval b = measured_ree(max_entangled(d), fam);
    const double target = std::log2(d + 1.0) - 1;
    MESSAGE("d=" << d << " lower " << b.lower << " target " << target << " upper " << b.upper << " newton "
                 << b.newton_steps << " " << seconds_since(t0) << "s");
    CHECK(b.lower >= target - 1e-6);
    CHECK(b.lower <= b.upper + 1e-9);
    CHECK(measured_certificate_lower(max_entangled(d), fam, b.certificate) == doctest::Approx(b.lower).epsilon(1e-9));
  }
}

TEST_CASE("measured_ree lies below ree_ppt") {
  Rng rng(15);
  const Bipartition cut = Bipartition::two_party(2, 2);
  const MeasurementFamily fam = default_family(cut, 3, 7);
  for (int k = 0; k < 10; ++k) {
    DensityMatrix rho = random_density({2, 2}, rng, 1 + k % 4, {0});
    BoundInterval r = ree_ppt(rho);
    BoundInterval m = measured_ree(rho, fam, {}, &r);
    CHECK(m.lower <= r.upper + 1e-9);
    CHECK(m.lower >= -1e-9);
    CHECK(measured_certificate_lower(rho, fam, m.certificate) >= m.lower - 1e-9);
  }
  DensityMatrix sep = random_separable(2, 2, rng);
  BoundInterval s = measured_ree(sep, fam);
  CHECK(s.upper <= 1e-6);
  CHECK(s.lower <= s.upper);
}

TEST_CASE("measured_ree rejects mismatched families") {
  const MeasurementFamily fam = default_family(Bipartition::two_party(2, 2), 1, 1);
  CHECK_THROWS_AS(measured_ree(max_entangled(3), fam), std::invalid_argument);
  MeasurementFamily empty = fam;
  empty.povms.clear();
  CHECK_THROWS_AS(measured_ree(max_entangled(2), empty), std::invalid_argument);
}

TEST_CASE("Piani inequality examples") {
  const MeasurementFamily fam = default_family(Bipartition::two_party(2, 2), 2, 3);
  SUBCASE("Phi_2 (x) Phi_2") {
    InequalityRecord r = check_piani(pair_state(max_entangled(2), max_entangled(2)), fam);
    MESSAGE(r.detail);
    CHECK(r.lhs.contains(2.0, 1e-3));
    CHECK(r.lhs.lower - r.rhs_lower >= -1e-3);
    CHECK_FALSE(r.failed());
  }
  SUBCASE("entangled (x) separable") {
    Rng rng(16);
    InequalityRecord r = check_piani(pair_state(isotropic(2, 0.8), random_separable(2, 2, rng)), fam);
    CHECK(r.rhs_terms[1].upper <= 1e-6);
    CHECK(r.lhs.lower - r.rhs_upper >= -1e-6);
    CHECK_FALSE(r.failed());
  }
}

TEST_CASE("strong superadditivity examples") {
  const Bipartition c22 = Bipartition::two_party(2, 2);
  const MeasurementFamily fam = default_family(c22, 1, 3);
  Rng rng(17);
  SUBCASE("product of separable states") {
    DensityMatrix rho4 = pair_state(random_separable(2, 2, rng), random_separable(2, 2, rng));
    const MeasurementFamily full = default_family(rho4.bipartition(), 1, 4);
    InequalityRecord r = check_strong_superadditivity(rho4, full, fam, fam);
    CHECK(r.lhs.upper <= 1e-6);
    CHECK(r.rhs_upper <= 1e-6);
    CHECK(r.status == CheckStatus::kCertified);
  }
  SUBCASE("Phi_2 (x) separable") {
    DensityMatrix rho4 = pair_state(max_entangled(2), random_separable(2, 2, rng));
    const MeasurementFamily full = default_family(rho4.bipartition(), 1, 4);
    InequalityRecord r = check_strong_superadditivity(rho4, full, fam, fam);
    MESSAGE(r.detail);
    CHECK(r.lhs.upper >= 0.58);
    CHECK(r.rhs_lower >= 0.58);
    CHECK_FALSE(r.failed());
  }
}

TEST_CASE("asymptotic continuity examples") {
  const MeasurementFamily fam = default_family(Bipartition::two_party(2, 2), 2, 5);
  InequalityRecord same = check_asymptotic_continuity(max_entangled(2), max_entangled(2), fam);
  CHECK(same.lhs.upper == doctest::Approx(0.0));
  CHECK_FALSE(same.failed());
  InequalityRecord r = check_asymptotic_continuity(max_entangled(2), isotropic(2, 0.95), fam);
  MESSAGE(r.detail);
  CHECK_FALSE(r.failed());
  CHECK(r.slack >= 0);
}

TEST_CASE("Pinsker examples") {
  const MeasurementFamily fam = default_family(Bipartition::two_party(2, 2), 2, 6);
  Rng rng(18);
  InequalityRecord sep = check_pinsker(random_separable(2, 2, rng), fam);
  CHECK(sep.rhs_upper <= 1e-6);
  CHECK_FALSE(sep.failed());
  InequalityRecord phi = check_pinsker(max_entangled(2), fam);
  MESSAGE(phi.detail);
  CHECK(phi.lhs.upper >= 0.58);
  CHECK_FALSE(phi.failed());
}
