#pragma once

// Entropies and divergences, all in bits.
//
// Support tests use the eigenvalue threshold 1e-12; 0 log 0 = 0 and
// p log(p / 0) = +inf for p > 0.

#include <vector>

#include "resmono/linalg.hpp"
#include "resmono/measurement.hpp"
#include "resmono/states.hpp"

namespace resmono {

/// A divergence value: finite bits, or +infinity.
struct DivergenceValue {
  double value = 0.0;
  bool infinite = false;

  static DivergenceValue inf() { return {0.0, true}; }
  static DivergenceValue finite(double v) { return {v, false}; }
  /// +inf mapped to std::numeric_limits<double>::infinity().
  double as_double() const;
};

inline constexpr double kSupportThreshold = 1e-12;

double vn_entropy(const Matrix& rho);
double vn_entropy(const DensityMatrix& rho);
/// Shannon entropy of the diagonal / of a distribution.
double shannon(const std::vector<double>& p);

DivergenceValue umegaki(const Matrix& rho, const Matrix& sigma);
DivergenceValue umegaki(const DensityMatrix& rho, const DensityMatrix& sigma);
DivergenceValue kl(const ProbVector& p, const ProbVector& q);

/// p log(p/q) + (1-p) log((1-p)/(1-q)). Throws std::domain_error when p is
/// outside [0, 1], q outside [0, 1], or q in {0, 1} with p != q.
double binary_d2(double p, double q);

double trace_distance(const Matrix& rho, const Matrix& omega);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& omega);

/// (1 + x) log(1 + x) - x log x; throws std::domain_error for x < 0.
double g_fn(double x);
/// Binary entropy; throws std::domain_error outside [0, 1].
double h2(double x);

/// |D(rho_XS || sigma_XS) - D(p || q) - sum_x p_x D(rho_x || sigma_x)| with
/// the classical-quantum states assembled as explicit block-diagonal
/// matrices. Returns 0 when both sides are +inf and +inf when exactly one is.
double cq_chain_identity_check(const ProbVector& px, const std::vector<Matrix>& rhos, const ProbVector& qx,
                               const std::vector<Matrix>& sigmas);

/// max over the family of sum_i |Tr[E_i X]|; a lower bound on the norm
/// induced by all measurements of the cone and never above ||X||_1.
double family_norm(const Matrix& x, const MeasurementFamily& family);

}  // namespace resmono
