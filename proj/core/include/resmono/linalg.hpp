#pragma once

// Dense complex Hermitian linear algebra used throughout resmono.
//
// Every quantity of interest here is an operator on a finite tensor-product
// Hilbert space of modest size (at most a few hundred dimensions), so plain
// dense Eigen matrices are used everywhere. Subsystem structure is carried
// separately as a list of local dimensions; index ordering is the usual
// row-major Kronecker convention (first subsystem is the most significant
// digit).

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace resmono {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Local dimensions of the tensor factors of a composite system.
using Dims = std::vector<int>;

/// Product of all entries of `dims`.
int total_dim(const Dims& dims);

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct HermEig {
  RealVector values;
  Matrix vectors;
  /// max_ij |M_ij - conj(M_ji)| / max|M| of the input before symmetrization.
  double asymmetry = 0.0;

  /// True when the symmetrization pre-step had to correct more than 1e-10.
  bool symmetrization_warning() const { return asymmetry > 1e-10; }

  Matrix reconstruct() const;
};

/// Eigendecomposition of (M + M^dag)/2.
///
/// Throws std::invalid_argument for non-square input and std::runtime_error
/// if the eigensolver fails to converge.
HermEig herm_eig(const Matrix& m);

/// Eigenvalues only, ascending.
RealVector herm_eigenvalues(const Matrix& m);

/// Eigendecomposition of a real symmetric matrix (ascending values).
struct SymEig {
  RealVector values;
  RealMatrix vectors;
};
SymEig sym_eig(const RealMatrix& m);

double min_eigenvalue(const Matrix& m);
double max_eigenvalue(const Matrix& m);

enum class MatrixFunction { kLog2, kExp2, kXLog2X };

/// Applies a scalar function eigenvalue-wise in the eigenbasis of `m`.
///
/// kLog2 requires strictly positive eigenvalues; kXLog2X uses 0 log 0 = 0 and
/// tolerates eigenvalues down to -1e-10 (treated as zero). Violations throw
/// std::domain_error.
Matrix matrix_fn(const Matrix& m, MatrixFunction fn);

/// Frechet derivative of sigma -> Tr[rho log2 sigma].
///
/// Returns G such that Tr[G Delta] = d/dt Tr[rho log2(sigma + t Delta)] at
/// t = 0 for every Hermitian Delta. Evaluated with divided differences of
/// log2 in the eigenbasis of sigma. Throws std::domain_error when the smallest
/// eigenvalue of sigma is not above 1e-12.
Matrix log_gradient(const Matrix& rho, const Matrix& sigma);

/// Traces out every subsystem not listed in `keep`. The kept subsystems stay
/// in their original relative order.
Matrix partial_trace(const Matrix& m, const Dims& dims, const std::vector<int>& keep);

/// Transposes the listed subsystems. A linear involution that preserves the
/// trace and Hermiticity and is an isometry for the Frobenius norm.
Matrix partial_transpose(const Matrix& m, const Dims& dims, const std::vector<int>& subsystems);

/// Two-party convenience form: transposes subsystem `subsystem` of a
/// bipartite operator with local dimensions `dims`.
Matrix partial_transpose(const Matrix& m, std::pair<int, int> dims, int subsystem);

/// Reorders tensor factors: factor k of the result is factor order[k] of `m`.
Matrix permute_subsystems(const Matrix& m, const Dims& dims, const std::vector<int>& order);

/// Same permutation applied to a state vector.
Vector permute_subsystems(const Vector& v, const Dims& dims, const std::vector<int>& order);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Sum of singular values.
double trace_norm(const Matrix& m);
double frobenius(const Matrix& m);

/// (M + M^dag) / 2
Matrix hermitian_part(const Matrix& m);

/// Real Frobenius inner product Re Tr[A^dag B].
double inner(const Matrix& a, const Matrix& b);

}  // namespace resmono
