#include "resmono/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "resmono/divergences.hpp"
#include "resmono/optimize.hpp"

namespace resmono {

Matrix dephase(const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  out.diagonal() = rho.diagonal().real().cast<Complex>();
  return out;
}

DensityMatrix dephase(const DensityMatrix& rho) { return DensityMatrix(dephase(rho.matrix()), rho.dims(), rho.cut()); }

Matrix trim(const Matrix& rho) {
  const Eigen::Index n = rho.rows();
  Matrix out = dephase(rho);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double bound = rho(i, i).real() * rho(j, j).real();
      if (std::norm(rho(i, j)) >= (1.0 - kTrimTolerance) * bound) out(i, j) = rho(i, j);
    }
  }
  return out;
}

double c_r(const Matrix& rho) { return std::max(0.0, vn_entropy(dephase(rho)) - vn_entropy(rho)); }
double c_r(const DensityMatrix& rho) { return c_r(rho.matrix()); }

double quintessential(const DensityMatrix& rho) {
  return std::max(0.0, vn_entropy(dephase(rho.matrix())) - vn_entropy(trim(rho.matrix())));
}

double decomposition_value(const Matrix& factor, const Matrix& u) {
  const Matrix psi = factor * u.transpose();
  double total = 0;
  for (Eigen::Index x = 0; x < psi.cols(); ++x) {
    const RealVector w = psi.col(x).cwiseAbs2();
    const double p = w.sum();
    if (p <= 0) continue;
    double h = p * std::log2(p);
    for (Eigen::Index k = 0; k < w.size(); ++k)
      if (w(k) > 0) h -= w(k) * std::log2(w(k));
    total += h;
  }
  return total;
}

namespace {

// Columns sqrt(lambda_i) v_i over the nonzero spectrum.
Matrix square_root_factor(const Matrix& rho, double cutoff) {
  const HermEig e = herm_eig(rho);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > cutoff) keep.push_back(i);
  Matrix a(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) a.col(k) = std::sqrt(e.values(keep[k])) * e.vectors.col(keep[k]);
  return a;
}

// m x r isometry from 2 m r real parameters (thin Q of the QR factorization).
Matrix isometry_from_params(const RealVector& x, int m, int r) {
  Matrix y(m, r);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < r; ++j) y(i, j) = Complex(x(2 * (i * r + j)), x(2 * (i * r + j) + 1));
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(m, r);
}

double qubit_two_element(const Matrix& a, double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  Matrix u(2, 2);
  u << c, s * e, s, -c * e;
  return decomposition_value(a, u);
}

}  // namespace

double qubit_cf_brute_force(const Matrix& rho) {
  if (rho.rows() != 2) throw std::invalid_argument("qubit_cf_brute_force: not a qubit");
  const HermEig e = herm_eig(rho);
  Matrix a(2, 2);
  for (int i = 0; i < 2; ++i) a.col(i) = std::sqrt(std::max(0.0, e.values(i))) * e.vectors.col(i);
  const double pi = std::numbers::pi;
  double best = std::numeric_limits<double>::infinity(), bt = 0, bp = 0;
  const int nt = 158, np = 629;  // spacing 1e-2
  for (int i = 0; i <= nt; ++i) {
    const double t = 0.5 * pi * i / nt;
    for (int j = 0; j < np; ++j) {
      const double p = 2 * pi * j / np;
      const double v = qubit_two_element(a, t, p);
      if (v < best) best = v, bt = t, bp = p;
    }
  }
  // Zoom: 21 x 21 grids around the incumbent, spacing shrinking by 4.
  double ht = 0.5 * pi / nt, hp = 2 * pi / np;
  for (int round = 0; round < 20; ++round) {
    const double ct = bt, cp = bp;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const double t = ct + 0.2 * i * ht, p = cp + 0.2 * j * hp;
        const double v = qubit_two_element(a, t, p);
        if (v < best) best = v, bt = t, bp = p;
      }
    }
    ht *= 0.25;
    hp *= 0.25;
  }
  return best;
}

CoherenceOfFormation c_f(const DensityMatrix& rho, const CfOptions& opts) {
  const int d = rho.dim();
  const Matrix a = square_root_factor(rho.matrix(), 1e-13);
  const int r = static_cast<int>(a.cols());
  const int m = opts.ensemble_size > 0 ? opts.ensemble_size : d * d;
  if (m < r) throw std::invalid_argument("c_f: ensemble_size below rank");
  CoherenceOfFormation out;
  out.ensemble_size = m;
  auto f = [&](const RealVector& x) { return decomposition_value(a, isometry_from_params(x, m, r)); };
  Rng rng(opts.seed);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < std::max(1, opts.restarts); ++k) {
    RealVector x0(2 * m * r);
    if (k == 0) {
      // Eigen-decomposition embedded in the first r members.
      x0.setZero();
      for (int j = 0; j < r; ++j) x0(2 * (j * r + j)) = 1.0;
    } else {
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = rng.normal();
    }
    const PatternSearchResult res = pattern_search(f, x0, {0.5, 1e-8, 0.5, 200000});
    out.evals += res.evals;
    best = std::min(best, res.value);
  }
  out.optimizer_value = std::max(0.0, best);
  out.value = out.optimizer_value;
  if (d == 2) {
    out.brute_force = std::max(0.0, qubit_cf_brute_force(rho.matrix()));
    out.has_brute_force = true;
    out.exact = std::abs(out.brute_force - out.optimizer_value) <= 1e-4;
    out.value = std::min(out.value, out.brute_force);
  }
  return out;
}

MaxCorrState max_corr(const DensityMatrix& rho) {
  const int d = rho.dim();
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = rho.matrix()(i, j);
  return {DensityMatrix(m, {d, d}, {0}), rho.matrix()};
}

double coherent_info(const DensityMatrix& rho_ab) {
  if (rho_ab.dims().size() != 2) throw std::invalid_argument("coherent_info: expected two factors");
  return vn_entropy(rho_ab.marginal({1})) - vn_entropy(rho_ab);
}

double check_cr_identity(const DensityMatrix& rho) { return std::abs(c_r(rho) - coherent_info(max_corr(rho).state)); }

InequalityRecord check_cr_strong_superadditivity(const DensityMatrix& rho, double tol) {
  if (!rho.has_cut()) throw std::invalid_argument("check_cr_strong_superadditivity: state has no cut");
  const Bipartition bp = rho.bipartition();
  auto exact = [](double v) {
    BoundInterval b;
    b.lower = b.upper = v;
    b.lower_certificate = "closed form";
    b.converged = true;
    return b;
  };
  InequalityRecord r;
  r.name = "cr-strong-superadditivity";
  r.tol = tol;
  r.lhs = exact(c_r(rho));
  r.rhs_terms = {exact(c_r(rho.marginal(bp.side_a))), exact(c_r(rho.marginal(bp.side_b())))};
  r.rhs_lower = r.rhs_upper = r.rhs_terms[0].upper + r.rhs_terms[1].upper;
  r.slack = r.lhs.lower - r.rhs_upper;
  r.status = r.slack >= -tol ? CheckStatus::kCertified : CheckStatus::kViolated;
  return r;
}

}  // namespace resmono
