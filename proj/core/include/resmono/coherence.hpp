#pragma once

// Coherence monotones in the computational basis.
//
//   C_r(rho) = S(Delta(rho)) - S(rho)
//   Q(rho)   = S(Delta(rho)) - S(trim(rho))
//   C_f(rho) = inf_{p_x, psi_x} sum_x p_x S(Delta(psi_x))

#include <cstdint>

#include "resmono/records.hpp"
#include "resmono/states.hpp"

namespace resmono {

/// Relative tolerance for |rho_ij|^2 >= rho_ii rho_jj in trim().
inline constexpr double kTrimTolerance = 1e-9;

DensityMatrix dephase(const DensityMatrix& rho);
Matrix dephase(const Matrix& rho);

/// Keeps the diagonal and the off-diagonal entries with
/// |rho_ij|^2 >= (1 - kTrimTolerance) rho_ii rho_jj; zeroes the rest.
Matrix trim(const Matrix& rho);

double c_r(const DensityMatrix& rho);
double c_r(const Matrix& rho);
double quintessential(const DensityMatrix& rho);

struct CfOptions {
  /// Decomposition size; 0 means d^2.
  int ensemble_size = 0;
  int restarts = 16;
  std::uint64_t seed = 1;
};

struct CoherenceOfFormation {
  /// Best decomposition value found; always an upper bound on C_f.
  double value = 0.0;
  double optimizer_value = 0.0;
  /// d = 2 only: grid-and-zoom search over two-element decompositions.
  double brute_force = 0.0;
  bool has_brute_force = false;
  /// d = 2 and optimizer and brute force agree within 1e-4.
  bool exact = false;
  int ensemble_size = 0;
  int evals = 0;
};

CoherenceOfFormation c_f(const DensityMatrix& rho, const CfOptions& opts = {});

/// Average dephased entropy of the decomposition psi_x = sum_i u_xi a_i,
/// where the columns a_i of `factor` satisfy sum_i a_i a_i^dag = rho and u
/// has orthonormal columns.
double decomposition_value(const Matrix& factor, const Matrix& u);

/// Grid-and-zoom minimum over two-element pure decompositions of a qubit.
double qubit_cf_brute_force(const Matrix& rho);

struct MaxCorrState {
  /// sum_ij rho_ij |ii><jj| on d x d with cut {0}.
  DensityMatrix state;
  Matrix source;
};

MaxCorrState max_corr(const DensityMatrix& rho);

/// I_c(A>A') = S(rho_A') - S(rho_AA') for a two-factor state.
double coherent_info(const DensityMatrix& rho_ab);

/// |C_r(rho) - I_c(A>A')| evaluated at max_corr(rho).
double check_cr_identity(const DensityMatrix& rho);

/// C_r(rho_AB) >= C_r(rho_A) + C_r(rho_B) across the cut of rho, all terms exact.
InequalityRecord check_cr_strong_superadditivity(const DensityMatrix& rho, double tol = 1e-9);

}  // namespace resmono
