#pragma once

// Certified intervals and inequality-check records.

#include <limits>
#include <string>
#include <vector>

#include "resmono/linalg.hpp"

namespace resmono {

/// Data from which a lower bound is recomputed without the solver:
///   lower = sum_j lambda_j a_j + lambda_min(sum_j lambda_j W_j - psd(z)^Gamma)
/// where (a_j, W_j) is the linearization of the j-th objective at `point`.
/// For the relative entropy there is one objective and lambda = {1}.
struct LinearizationCertificate {
  Matrix point;
  Matrix z;
  std::vector<double> lambda;
  bool empty() const { return point.size() == 0; }
};

struct BoundInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  /// Human-readable account of the lower bound (gap value, family).
  std::string lower_certificate;
  /// Feasible PPT state attaining `upper`.
  Matrix upper_certificate;
  LinearizationCertificate certificate;
  /// Last certified Frank-Wolfe gap (relative entropy only).
  double fw_gap = std::numeric_limits<double>::infinity();
  /// Best-so-far upper value after each accepted iterate.
  std::vector<double> upper_history;
  int iterations = 0;
  int newton_steps = 0;
  bool converged = false;

  double width() const { return upper - lower; }
  bool contains(double x, double tol = 0.0) const { return x >= lower - tol && x <= upper + tol; }
  BoundInterval scaled(double s) const;
};

enum class CheckStatus { kCertified, kInconclusive, kViolated };

const char* to_string(CheckStatus s);

struct InequalityRecord {
  std::string name;
  CheckStatus status = CheckStatus::kInconclusive;
  /// Sides of "lhs >= rhs" as intervals; rhs is a sum of terms.
  BoundInterval lhs;
  std::vector<BoundInterval> rhs_terms;
  double rhs_lower = 0.0;
  double rhs_upper = 0.0;
  /// Certified slack lhs.lower - rhs_upper (>= -tol means certified).
  double slack = 0.0;
  /// Width allowance used before a violation is declared.
  double allowance = 0.0;
  double tol = 0.0;
  std::string detail;

  bool failed() const { return status == CheckStatus::kViolated; }
};

}  // namespace resmono
