#include "resmono/divergences.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace resmono {

double DivergenceValue::as_double() const { return infinite ? std::numeric_limits<double>::infinity() : value; }

double shannon(const std::vector<double>& p) {
  double s = 0;
  for (double x : p)
    if (x > 0) s -= x * std::log2(x);
  return s;
}

double vn_entropy(const Matrix& rho) {
  RealVector ev = herm_eigenvalues(rho);
  double s = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0) s -= ev(i) * std::log2(ev(i));
  return std::max(0.0, s);
}

double vn_entropy(const DensityMatrix& rho) { return vn_entropy(rho.matrix()); }

DivergenceValue umegaki(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("umegaki: shape mismatch");
  }
  const HermEig es = herm_eig(sigma);
  const Matrix r = es.vectors.adjoint() * hermitian_part(rho) * es.vectors;
  double cross = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double w = r(i, i).real();
    if (es.values(i) <= kSupportThreshold) {
      if (w > kSupportThreshold) return DivergenceValue::inf();
      continue;
    }
    cross += w * std::log2(es.values(i));
  }
  const double v = -vn_entropy(rho) - cross;
  return DivergenceValue::finite(std::max(0.0, v));
}

DivergenceValue umegaki(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return umegaki(rho.matrix(), sigma.matrix());
}

DivergenceValue kl(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl: length mismatch");
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0) return DivergenceValue::inf();
    s += p[i] * std::log2(p[i] / q[i]);
  }
  return DivergenceValue::finite(std::max(0.0, s));
}

double binary_d2(double p, double q) {
  if (!(p >= 0 && p <= 1) || !(q >= 0 && q <= 1)) throw std::domain_error("binary_d2: argument outside [0, 1]");
  if ((q == 0 || q == 1) && p != q) throw std::domain_error("binary_d2: q on the boundary with p != q");
  double s = 0;
  if (p > 0) s += p * std::log2(p / q);
  if (p < 1) s += (1 - p) * std::log2((1 - p) / (1 - q));
  return std::max(0.0, s);
}

double trace_distance(const Matrix& rho, const Matrix& omega) { return 0.5 * trace_norm(rho - omega); }

double trace_distance(const DensityMatrix& rho, const DensityMatrix& omega) {
  return trace_distance(rho.matrix(), omega.matrix());
}

double g_fn(double x) {
  if (!(x >= 0)) throw std::domain_error("g_fn: negative argument");
  if (x == 0) return 0.0;
  return (1 + x) * std::log2(1 + x) - x * std::log2(x);
}

double h2(double x) {
  if (!(x >= 0 && x <= 1)) throw std::domain_error("h2: argument outside [0, 1]");
  double s = 0;
  if (x > 0) s -= x * std::log2(x);
  if (x < 1) s -= (1 - x) * std::log2(1 - x);
  return s;
}

double cq_chain_identity_check(const ProbVector& px, const std::vector<Matrix>& rhos, const ProbVector& qx,
                               const std::vector<Matrix>& sigmas) {
  const std::size_t n = px.size();
  if (qx.size() != n || rhos.size() != n || sigmas.size() != n) {
    throw std::invalid_argument("cq_chain_identity_check: length mismatch");
  }
  if (n == 0) throw std::invalid_argument("cq_chain_identity_check: empty ensemble");
  const Eigen::Index d = rhos[0].rows();
  for (std::size_t x = 0; x < n; ++x) {
    if (rhos[x].rows() != d || sigmas[x].rows() != d) throw std::invalid_argument("cq_chain_identity_check: shape mismatch");
  }
  const Eigen::Index big = d * static_cast<Eigen::Index>(n);
  Matrix rxs = Matrix::Zero(big, big), sxs = Matrix::Zero(big, big);
  for (std::size_t x = 0; x < n; ++x) {
    rxs.block(x * d, x * d, d, d) = px[x] * rhos[x];
    sxs.block(x * d, x * d, d, d) = qx[x] * sigmas[x];
  }
  const DivergenceValue lhs = umegaki(rxs, sxs);
  DivergenceValue rhs = kl(px, qx);
  for (std::size_t x = 0; x < n && !rhs.infinite; ++x) {
    if (px[x] <= 0) continue;
    const DivergenceValue t = umegaki(rhos[x], sigmas[x]);
    if (t.infinite) rhs = DivergenceValue::inf();
    else rhs.value += px[x] * t.value;
  }
  if (lhs.infinite && rhs.infinite) return 0.0;
  if (lhs.infinite != rhs.infinite) return std::numeric_limits<double>::infinity();
  return std::abs(lhs.value - rhs.value);
}

double family_norm(const Matrix& x, const MeasurementFamily& family) {
  double best = 0;
  for (const Povm& m : family.povms) {
    double s = 0;
    for (double v : m.apply(x)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace resmono
