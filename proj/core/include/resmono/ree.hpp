#pragma once

// Relative entropy of PPT entanglement and its measured variant.
//
//   D_PPT(rho)      = min_{sigma PPT} D(rho || sigma)
//   D_PPT^PPT(rho)  = min_{sigma PPT} sup_{M in family} D(M(rho) || M(sigma))
//
// Both are returned as certified intervals. Upper bounds are values at
// explicit PPT states. Lower bounds come from one linearization of the
// (convex) objective at a point sigma0 and a dual PPT multiplier Z:
//   f(sigma) >= f(sigma0) + <grad f(sigma0), sigma - sigma0>
//   min_{sigma PPT density} <W, sigma> >= lambda_min(W - Z^Gamma),  Z >= 0.
// The solver first runs Frank-Wolfe (lmo_ppt as oracle, exact line search)
// and then polishes with a log-barrier Newton method when the interval is
// still wider than `tol`.

#include <vector>

#include "resmono/cones.hpp"
#include "resmono/measurement.hpp"
#include "resmono/records.hpp"
#include "resmono/states.hpp"

namespace resmono {

struct ReeOptions {
  /// Mixing weight with I/dim applied to every Frank-Wolfe atom.
  double eps_floor = 1e-6;
  /// Frank-Wolfe iterations.
  int max_iter = 40;
  /// Frank-Wolfe iterations before the first barrier polish.
  int warmup_iter = 3;
  /// Target interval width.
  double tol = 1e-6;
  /// Barrier polish budget in Newton steps (0 disables the polish).
  int max_newton = 300;
  LmoOptions lmo = {1.0, 1e-8, 1e-5, 4000, 10};
};

BoundInterval ree_ppt(const DensityMatrix& rho, const ReeOptions& opts = {}, const Matrix* warm = nullptr);

/// Per-copy interval for D_PPT(rho^{(x) n}) / n, n in {1, 2, 3}. Throws
/// std::invalid_argument when dim(rho)^n > 81. For n > 1 the search is
/// warm-started from the n = 1 witness to the power n, so the per-copy upper
/// never exceeds the single-copy one.
BoundInterval regularized_ree_estimate(const DensityMatrix& rho, int n, const ReeOptions& opts = {});

/// All per-copy intervals for n = 1..n_max.
std::vector<BoundInterval> regularized_ree_sequence(const DensityMatrix& rho, int n_max, const ReeOptions& opts = {});

/// Recomputes a relative-entropy lower bound from its certificate.
double ree_certificate_lower(const DensityMatrix& rho, const LinearizationCertificate& cert);
/// D(rho || sigma) if sigma is a PPT density matrix (tolerance `ppt_tol`), +inf otherwise.
double ree_certificate_upper(const DensityMatrix& rho, const Matrix& sigma, double ppt_tol = 1e-10);

struct MeasuredReeOptions {
  double tol = 1e-7;
  int max_newton = 300;
  ReeOptions ree;
};

/// `ree` may carry a previously computed ree_ppt interval of the same state
/// (its upper bound and witness are reused).
BoundInterval measured_ree(const DensityMatrix& rho, const MeasurementFamily& family, const MeasuredReeOptions& opts = {},
                           const BoundInterval* ree = nullptr);

/// Recomputes a measured lower bound from its certificate.
double measured_certificate_lower(const DensityMatrix& rho, const MeasurementFamily& family,
                                  const LinearizationCertificate& cert);

struct CheckOptions {
  /// Slack granted to "certified" and "violated" verdicts; matches the
  /// default interval width of the solvers.
  double tol = 1e-6;
  ReeOptions ree;
  MeasuredReeOptions measured;
};

/// rho4 has factors (A, A', B, B') and the cut {A, A'} | {B, B'}.
/// D_PPT(rho4) >= D_PPT(rho_AB) + D_PPT^PPT(rho_A'B'), measured with `family_a2b2`.
InequalityRecord check_piani(const DensityMatrix& rho4, const MeasurementFamily& family_a2b2, const CheckOptions& opts = {});

/// D^PPT(rho4) >= D^PPT(rho_AB) + D^PPT(rho_A'B') with the given families
/// (on AA':BB', A:B and A':B').
InequalityRecord check_strong_superadditivity(const DensityMatrix& rho4, const MeasurementFamily& family_full,
                                              const MeasurementFamily& family_ab, const MeasurementFamily& family_a2b2,
                                              const CheckOptions& opts = {});

/// |D^PPT(rho) - D^PPT(omega)| <= eps log2 d + g(eps), d the smaller local
/// dimension, checked in both directions as lower(x) - upper(y) <= bound.
InequalityRecord check_asymptotic_continuity(const DensityMatrix& rho, const DensityMatrix& omega,
                                             const MeasurementFamily& family, const CheckOptions& opts = {});

/// measured upper >= (1/(2 ln 2)) min_c |rho - sigma_c|_family^2 over the
/// candidates {relative-entropy witness, measured minimizer, Dykstra point}.
InequalityRecord check_pinsker(const DensityMatrix& rho, const MeasurementFamily& family, const CheckOptions& opts = {});

}  // namespace resmono
