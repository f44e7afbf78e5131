#pragma once

// One-shot singlet fidelity under Choi-PPT operations, with and without a
// catalyst, as semidefinite programs.
//
// A map Lambda: in -> out has Choi matrix J on in (x) out with
// Lambda(w) = Tr_in[(w^T (x) I) J]. It is a Choi-PPT operation when J >= 0,
// Tr_out J = I and J is PSD after transposing every B-side factor of in and
// out. Twirling the target registers A'B' by U (x) U* costs nothing, so
//   J = Phi_D (x) J1 + (I - Phi_D)/(D^2 - 1) (x) J0,   D = 2^k,
// and the program is solved over (J1, J0) on in (x) CD:
//   maximize   Tr[(w^T (x) I) J1]
//   subject to J1, J0 >= 0,   Tr_CD (J1 + J0) = I
//              J1^G + J0^G/(D+1) >= 0,   J0^G/(D-1) - J1^G >= 0
// plus the catalyst constraints on X_i = Tr_in[(w^T (x) I) J_i].

#include <cstdint>
#include <string>
#include <vector>

#include "resmono/sdp.hpp"
#include "resmono/states.hpp"

namespace resmono {

struct ChoiMatrix {
  Matrix j;
  Dims in_dims;
  Dims out_dims;
  /// B-side factors of the input and of the output.
  std::vector<int> in_b;
  std::vector<int> out_b;

  int in_dim() const { return total_dim(in_dims); }
  int out_dim() const { return total_dim(out_dims); }
};

Matrix choi_apply(const ChoiMatrix& choi, const Matrix& rho);
ChoiMatrix identity_choi(const Dims& dims, const std::vector<int>& b_side);
ChoiMatrix depolarizing_choi(const Dims& in_dims, const Dims& out_dims);

struct ChoiCheck {
  double min_eig = 0.0;      // lambda_min(J)
  double tp_residual = 0.0;  // max |Tr_out J - I|
  double min_eig_pt = 0.0;   // lambda_min(J^G)
  bool valid(double tol = 1e-6) const { return min_eig >= -tol && tp_residual <= tol && min_eig_pt >= -tol; }
};

/// CP, TP and PPT-operation checks computed from J alone.
ChoiCheck verify_choi(const ChoiMatrix& choi);

enum class CatalystMode { kStrict, kCorrelated };

struct FidelityOptions {
  SdpOptions sdp;
  /// Rebuild the full Choi matrix and verify it (eigendecompositions of size
  /// dim(in) dim(out)).
  bool verify_full_choi = true;
};

struct FidelityResult {
  /// Primal objective of the solver's final iterate.
  double value = 0.0;
  /// Certified upper bound on the Choi-PPT optimum.
  double upper = 0.0;
  double primal_residual = 0.0;
  double affine_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;
  /// Full Choi matrix and its independent checks (when requested).
  ChoiMatrix choi;
  ChoiCheck check;
  /// Tr[Phi_D Lambda(w)] recomputed through choi_apply.
  double choi_fidelity = 0.0;
  /// Lambda(w) on (A', B', catalyst factors).
  Matrix output;
  /// Catalyst state on the success branch, X1 / Tr X1.
  Matrix success_catalyst;
  /// Dual certificate behind `upper` (see sdp.hpp).
  std::vector<double> dual_y;
  std::vector<Matrix> dual_cones;
};

/// max Tr[Phi_2^{(x)k} Lambda(rho)] over Choi-PPT operations AB -> A'B'.
/// Throws std::invalid_argument if dim(rho) 4^k > 4096 or rho has no cut.
FidelityResult ppt_ops_fidelity(const DensityMatrix& rho, int k = 1, const FidelityOptions& opts = {});

/// Same on input rho (x) tau with the catalyst returned: marginally
/// (correlated) or as an exact tensor factor (strict; tau fixed, linear
/// constraints X_i = Tr[X_i] tau).
FidelityResult catalytic_fidelity(const DensityMatrix& rho, const DensityMatrix& tau, int k = 1,
                                  CatalystMode mode = CatalystMode::kCorrelated, const FidelityOptions& opts = {});

/// Rebuilds the program for (rho, tau, k, mode) and re-evaluates the dual
/// certificate stored in `result`; pass a 1 x 1 tau for the catalyst-free
/// program.
double recheck_upper_bound(const DensityMatrix& rho, const DensityMatrix& tau, int k, CatalystMode mode,
                           const FidelityResult& result);

struct SweepEntry {
  std::string name;
  DensityMatrix catalyst;
  FidelityResult result;
};

/// `n_random` random separable catalysts of local dimension `cat_dim` and 5
/// structured ones: trivial, maximally mixed, |00>, and two PPT mixtures of
/// maximally entangled states (Bell-diagonal for cat_dim = 2, isotropic
/// otherwise).
std::vector<std::pair<std::string, DensityMatrix>> default_catalysts(std::uint64_t seed, int n_random = 20, int cat_dim = 2);

std::vector<SweepEntry> catalyst_sweep(const DensityMatrix& rho, const std::vector<std::pair<std::string, DensityMatrix>>& catalysts,
                                       int k = 1, CatalystMode mode = CatalystMode::kCorrelated, const FidelityOptions& opts = {});

struct CatalystSearchResult {
  DensityMatrix best_catalyst;
  FidelityResult best;
  std::vector<double> history;
};

/// Alternates a correlated-mode solve with tau <- success-branch catalyst
/// state. Round 0 uses a random separable catalyst of local dimension
/// `dim_cap` per side.
CatalystSearchResult catalyst_search(const DensityMatrix& rho, int k, int dim_cap, int rounds, std::uint64_t seed,
                                     const FidelityOptions& opts = {});

}  // namespace resmono
