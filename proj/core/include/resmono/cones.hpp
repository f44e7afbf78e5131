#pragma once

// PPT cone membership, Frobenius projections and a linear minimization
// oracle over PPT density matrices.

#include <optional>
#include <vector>

#include "resmono/linalg.hpp"
#include "resmono/states.hpp"

namespace resmono {

/// Partial transpose over the B side of `cut`.
Matrix gamma(const Matrix& m, const Bipartition& cut);

/// True iff the smallest eigenvalue of rho^Gamma is >= -tol. Throws
/// std::invalid_argument when rho has no cut.
bool is_ppt(const DensityMatrix& rho, double tol = 1e-10);
bool is_ppt(const Matrix& m, const Bipartition& cut, double tol = 1e-10);
double min_pt_eigenvalue(const Matrix& m, const Bipartition& cut);

/// Eigenvalue clipping at zero.
Matrix psd_project(const Matrix& h);

/// Euclidean projection of a real vector onto the probability simplex.
RealVector simplex_project(const RealVector& v);

/// Frobenius-nearest density matrix (eigenvalues projected onto the simplex).
Matrix density_project(const Matrix& h);

/// Mixes a unit-trace PSD matrix with I/D just enough to make it PPT.
/// Returns the mixing weight in `weight` if non-null.
Matrix ppt_mix_fix(const Matrix& x, const Bipartition& cut, double* weight = nullptr);

struct ProjectionResult {
  DensityMatrix point;
  int iterations = 0;
  /// ||x - y||_F between the last pair of alternating iterates.
  double residual = 0.0;
  std::vector<double> residual_history;
  bool converged = false;
};

/// Dykstra alternating projections between {PSD, Tr = 1} and
/// {X : X^Gamma PSD}. The returned point is additionally mixed with the
/// maximally mixed state (ppt_mix_fix) so that it is PSD and PPT to working
/// precision. On hitting the cap the last iterate is returned with
/// converged = false.
ProjectionResult dykstra_ppt_density(const Matrix& h, const Bipartition& cut, int max_iter = 5000, double tol = 1e-10);

struct LmoOptions {
  double rho = 1.0;
  double feas_tol = 1e-8;
  double obj_tol = 1e-6;
  int max_iter = 20000;
  int check_every = 10;
};

/// ADMM state carried between related LMO calls.
struct LmoWarmStart {
  Matrix y;
  Matrix u;
  double rho = 1.0;
  bool valid() const { return y.size() > 0; }
};

struct LmoResult {
  /// PPT density matrix (exactly feasible up to eigensolver precision).
  Matrix minimizer;
  /// Tr[G minimizer].
  double objective = 0.0;
  /// Certified lower bound on min Tr[G sigma] over PPT states, from the
  /// dual variable: lambda_min(G - Z^Gamma) with Z = psd(-rho U).
  double lower = 0.0;
  /// Dual variable behind `lower`, in the scale of G: lower =
  /// lambda_min(G - dual_z^Gamma) up to the final clamp.
  Matrix dual_z;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// min Tr[G sigma] subject to sigma >= 0, sigma^Gamma >= 0, Tr sigma = 1.
/// Splits sigma and Y = sigma^Gamma and alternates a density projection, a
/// PSD projection and a scaled dual update, with residual balancing. Stops
/// once the primal residual is below feas_tol and objective - lower is below
/// obj_tol (both relative to the scale of G).
LmoResult lmo_ppt(const Matrix& g, const Bipartition& cut, const LmoOptions& opts = {},
                  LmoWarmStart* warm = nullptr);

/// Certified lower bound lambda_min(G - Z^Gamma) for an arbitrary Z (it is
/// clipped to the PSD cone first). Valid for any Hermitian input.
double lmo_dual_bound(const Matrix& g, const Matrix& z, const Bipartition& cut);

}  // namespace resmono
