#pragma once

// Log-barrier Newton method over PPT density matrices.
//
// Two objectives are supported:
//   kRee:       f(sigma) = D(rho || sigma)
//   kMeasured:  max_j D(M_j(rho) || M_j(sigma)), through the epigraph
//               variable t and barriers -log(t - KL_j(sigma)).
// Feasible set: Tr sigma = 1, sigma > 0, sigma^Gamma > 0 (strict; barriers
// -log det). Variables live in the isometric real vectorization, so the
// Newton system is real symmetric.

#include <vector>

#include "resmono/linalg.hpp"
#include "resmono/states.hpp"

namespace resmono::detail {

struct BarrierObjective {
  enum class Kind { kRee, kMeasured } kind = Kind::kRee;
  Matrix rho;
  double rho_entropy = 0.0;
  // Measured case: for each POVM the effects and the outcome distribution of rho.
  std::vector<std::vector<Matrix>> effects;
  std::vector<std::vector<double>> p;
};

struct BarrierOptions {
  double tau0 = 10.0;
  double mu = 10.0;
  /// Stop once (number of barrier terms) / tau is below this.
  double target_gap = 1e-9;
  int max_newton = 400;
  /// Stop the outer loop when the caller's certificate callback reports a
  /// width at or below this value.
  double width_tol = 0.0;
};

struct BarrierResult {
  Matrix sigma;
  double t = 0.0;
  double tau = 0.0;
  int newton_steps = 0;
  bool centered = false;
  /// Normalized epigraph multipliers (measured case).
  std::vector<double> lambda;
  /// Multiplier of sigma^Gamma >= 0, i.e. (1/tau) (sigma^Gamma)^{-1}.
  Matrix z;
};

/// Value of the objective at a strictly feasible point (no barrier terms).
double barrier_objective_value(const BarrierObjective& obj, const Matrix& sigma);

/// Runs the path-following method from a strictly feasible `start`.
/// `on_center` is called after each centering with the current result; if
/// it returns a certified width <= width_tol the method stops.
template <class F>
BarrierResult ppt_barrier_solve(const BarrierObjective& obj, const Bipartition& cut, const Matrix& start,
                                const BarrierOptions& opts, F&& on_center);

BarrierResult ppt_barrier_solve_impl(const BarrierObjective& obj, const Bipartition& cut, const Matrix& start,
                                     const BarrierOptions& opts, double (*cb)(void*, const BarrierResult&), void* ctx);

template <class F>
BarrierResult ppt_barrier_solve(const BarrierObjective& obj, const Bipartition& cut, const Matrix& start,
                                const BarrierOptions& opts, F&& on_center) {
  auto tramp = [](void* c, const BarrierResult& r) -> double { return (*static_cast<F*>(c))(r); };
  return ppt_barrier_solve_impl(obj, cut, start, opts, tramp, &on_center);
}

/// Second divided difference of log2 at (a, b, c).
double log2_dd2(double a, double b, double c);
/// First divided difference of log2.
double log2_dd1(double a, double b);

}  // namespace resmono::detail
