#pragma once

// Upper bounds on squashed entanglement and on the conditional entanglement
// of mutual information from explicit extensions.
//
// Extensions are generated from the canonical purification
// |psi> = sum_i sqrt(lambda_i) |v_i>_AB |i>_R by a channel R -> X given as a
// Stinespring isometry R -> X (x) F with |F| Kraus operators. Each value is
// attained by the returned extension, so it is an upper bound.

#include <cstdint>
#include <string>

#include "resmono/states.hpp"

namespace resmono {

/// I(A:B|E) = S(AE) + S(BE) - S(ABE) - S(E) for factors (A, B, E).
double cond_mutual_info(const Matrix& rho_abe, const Dims& dims);

struct ExtensionOptions {
  /// Dimensions of the extending systems: {E} for squashed, {A', B'} for CEMI.
  Dims ext_dims = {4};
  /// Number of Kraus operators; 0 means max(ext_dims).
  int kraus = 0;
  int restarts = 8;
  std::uint64_t seed = 1;
  int max_evals = 60000;
};

struct ExtensionBound {
  double value = 0.0;
  /// Extension attaining `value`: factors (A, B, E) or (A, A', B, B').
  Matrix extension;
  Dims dims;
  /// max |Tr_ext extension - rho_AB|.
  double marginal_residual = 0.0;
  std::string ansatz;
  int evals = 0;
};

/// (1/2) I(A:B|E) minimized over the ansatz; rho_ab two-party.
ExtensionBound squashed_upper(const DensityMatrix& rho_ab, const ExtensionOptions& opts = {});

/// (1/2)(I(AA':BB') - I(A':B')) minimized over the ansatz; ext_dims = {|A'|, |B'|}.
ExtensionBound cemi_upper(const DensityMatrix& rho_ab, const ExtensionOptions& opts = {});

/// Recomputes the objective of a returned extension from scratch.
double squashed_value(const Matrix& rho_abe, const Dims& dims);
double cemi_value(const Matrix& rho_aa2bb2, const Dims& dims);

struct SandwichRecord {
  ExtensionBound squashed;
  ExtensionBound cemi;
  double slack = 0.0;
  /// squashed.value <= cemi.value + tol; the ordering itself is not certified.
  bool consistent = false;
  const char* status() const { return consistent ? "consistent" : "inconclusive"; }
};

SandwichRecord check_sandwich(const DensityMatrix& rho_ab, const ExtensionOptions& squashed_opts = {},
                              const ExtensionOptions& cemi_opts = {{2, 2}}, double tol = 1e-6);

}  // namespace resmono
