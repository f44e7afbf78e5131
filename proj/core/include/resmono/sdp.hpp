#pragma once

// Small conic solver by operator splitting (ADMM).
//
//   maximize   <c, x>
//   subject to A x = b
//              B_k x >= 0 (PSD) for every cone row k
//
// x is a list of Hermitian blocks. A cone row is a weighted sum of blocks of
// one common size, each passed through the same isometric transform (the
// identity or a partial transpose); with this restriction B^*B acts on each
// size class as M (x) I for a small matrix M, which keeps the x-update a
// prefactored solve. Hermitian blocks are handled through the isometric real
// vectorization (diagonal entries, sqrt2 Re and sqrt2 Im of the upper
// triangle).
//
// Iteration (scaled form, penalty rho):
//   x = argmin -<c,x> + rho/2 |B x - z + u|^2  s.t. A x = b
//   v = alpha B x + (1 - alpha) z
//   z = Proj_PSD(v + u),     u += v - z
//
// Dual certificate: Z_k = psd(-rho u_k), y = least-squares solution of
// A^* y = c + B^* Z, R = A^* y - B^* Z - c. For every primal feasible x,
//   <c, x> <= <b, y> + sum_g bound_g max_{i in g} |R_i|_op
// whenever the caller promises sum_{i in g} |x_i|_1 <= bound_g on every
// trace group g. Blocks outside every trace group must have R_i = 0 for the
// bound to be finite.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "resmono/linalg.hpp"

namespace resmono {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Isometric real vectorization of an n x n Hermitian matrix (length n^2).
RealVector herm_to_vec(const Matrix& m);
Matrix vec_to_herm(const RealVector& v, int n);
/// Same maps on a segment of a longer vector.
void herm_to_vec(const Matrix& m, double* out);
Matrix vec_to_herm(const double* v, int n);

struct SdpTransform {
  /// Empty `subsystems` means identity; otherwise a partial transpose of the
  /// listed factors of `dims`.
  Dims dims;
  std::vector<int> subsystems;

  bool identity() const { return subsystems.empty(); }
  Matrix apply(const Matrix& m) const;
  bool operator==(const SdpTransform& o) const { return dims == o.dims && subsystems == o.subsystems; }
};

struct SdpConeTerm {
  int block;
  double coef;
};

struct SdpConeRow {
  std::string name;
  std::vector<SdpConeTerm> terms;
  SdpTransform transform;
};

class SdpProblem {
 public:
  /// Adjoint of a linear map from a block to m x m Hermitian matrices.
  using Adjoint = std::function<Matrix(const Matrix&)>;

  int add_block(int n, std::string name = {});
  void add_cone_row(SdpConeRow row);
  /// Shortcut for the row X_block >= 0.
  void add_psd(int block);

  /// Operator equality sum_j L_j(X_j) = target, given the adjoints L_j^*.
  /// Adds one scalar equation per element of the Hermitian basis of the
  /// target space (target.rows()^2 equations). With `trace_implied` the
  /// trace of the equality must already follow from earlier constraints and
  /// the (0, 0) equation is dropped to keep the system full rank.
  void add_equality(const std::vector<std::pair<int, Adjoint>>& terms, const Matrix& target, std::string name = {},
                    bool trace_implied = false);
  /// Scalar equality sum_j <F_j, X_j> = value.
  void add_scalar_equality(const std::vector<std::pair<int, Matrix>>& terms, double value);

  /// Adds <C, X_block> to the objective.
  void add_objective(int block, const Matrix& c);

  /// Promise: sum over `blocks` of the trace norm is at most `bound` on the
  /// feasible set.
  void add_trace_bound(std::vector<int> blocks, double bound);

  int num_blocks() const { return static_cast<int>(sizes_.size()); }
  int block_size(int j) const { return sizes_[j]; }
  long num_vars() const { return total_; }
  long num_equalities() const { return static_cast<long>(b_.size()); }
  const std::vector<SdpConeRow>& cone_rows() const { return rows_; }

  /// Assembled data (valid after construction is complete).
  SparseMatrix a_matrix() const;
  const std::vector<double>& b() const { return b_; }
  RealVector c_vector() const;
  long offset(int j) const { return offsets_[j]; }
  const std::vector<std::pair<std::vector<int>, double>>& trace_bounds() const { return trace_bounds_; }
  const std::string& block_name(int j) const { return names_[j]; }

  /// Applies the equality map to blocks; used by independent verification.
  RealVector apply_a(const std::vector<Matrix>& x) const;
  double objective(const std::vector<Matrix>& x) const;

 private:
  std::vector<int> sizes_;
  std::vector<std::string> names_;
  std::vector<long> offsets_;
  long total_ = 0;
  std::vector<SdpConeRow> rows_;
  std::vector<Eigen::Triplet<double>> a_trip_;
  std::vector<double> b_;
  std::vector<std::pair<int, Matrix>> c_terms_;
  std::vector<std::pair<std::vector<int>, double>> trace_bounds_;
};

struct SdpSolution;

struct SdpProgress {
  int iteration;
  double primal_residual;
  double dual_residual;
  double gap;
  double upper;
  double primal_objective;
  double rho;
};

struct SdpOptions {
  double rho = 1.0;
  /// Over-relaxation weight in [1, 2).
  double alpha = 1.6;
  /// Relative primal/dual residual and relative gap tolerance.
  double tol = 1e-6;
  int max_iter = 50000;
  int check_every = 25;
  /// Stop early once the certified upper bound drops below this value or
  /// the primal objective rises above `stop_if_primal_above` (decision
  /// problems). Infinite values disable the tests.
  double stop_if_upper_below = -std::numeric_limits<double>::infinity();
  double stop_if_primal_above = std::numeric_limits<double>::infinity();
  /// Adapt rho by x2 / /2 when the residual ratio exceeds 10.
  bool residual_balancing = true;
  /// Warm start (x blocks, z rows, u rows, rho); ignored when sizes mismatch.
  const SdpSolution* warm = nullptr;
  /// Called at every convergence check.
  std::function<void(const SdpProgress&)> on_check;
};

struct SdpSolution {
  std::vector<Matrix> x;
  std::vector<Matrix> z;
  std::vector<Matrix> u;
  double rho = 1.0;

  /// <c, x> at the last iterate (x satisfies A x = b to solve precision; the
  /// cone rows only up to primal_residual).
  double primal_objective = 0.0;
  /// Certified upper bound on the optimum (see header comment).
  double upper = std::numeric_limits<double>::infinity();
  /// Dual objective <b, y>.
  double dual_objective = std::numeric_limits<double>::infinity();
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double affine_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Equalities inconsistent or iterates diverging (infeasibility surrogate).
  bool infeasible = false;
  std::string status;

  std::vector<double> y;
  std::vector<Matrix> dual_cones;
};

SdpSolution admm_sdp(const SdpProblem& problem, const SdpOptions& opts = {});

/// Recomputes the certified upper bound of a dual pair (y, Z) from scratch
/// using only the problem data: no solver state is used.
double certified_upper_bound(const SdpProblem& problem, const std::vector<double>& y, const std::vector<Matrix>& dual_cones);

}  // namespace resmono
