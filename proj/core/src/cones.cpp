#include "resmono/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace resmono {

Matrix gamma(const Matrix& m, const Bipartition& cut) { return partial_transpose(m, cut.dims, cut.side_b()); }

double min_pt_eigenvalue(const Matrix& m, const Bipartition& cut) { return min_eigenvalue(gamma(m, cut)); }

bool is_ppt(const Matrix& m, const Bipartition& cut, double tol) { return min_pt_eigenvalue(m, cut) >= -tol; }

bool is_ppt(const DensityMatrix& rho, double tol) { return is_ppt(rho.matrix(), rho.bipartition(), tol); }

Matrix psd_project(const Matrix& h) {
  HermEig e = herm_eig(h);
  RealVector v = e.values.cwiseMax(0.0);
  return hermitian_part(e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

RealVector simplex_project(const RealVector& v) {
  // Sort-based projection (Held, Wolfe, Crowder).
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0, theta = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

Matrix density_project(const Matrix& h) {
  HermEig e = herm_eig(h);
  RealVector v = simplex_project(e.values);
  return hermitian_part(e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

Matrix ppt_mix_fix(const Matrix& x, const Bipartition& cut, double* weight) {
  const double n = static_cast<double>(x.rows());
  const double delta = -min_pt_eigenvalue(x, cut);
  double t = 0;
  Matrix out = x;
  if (delta > 0) {
    // Slight overshoot so the result is PPT despite rounding.
    t = std::min(1.0, (delta * (1 + 1e-12) + 1e-15) / (delta + 1.0 / n));
    out = (1 - t) * x + (t / n) * Matrix::Identity(x.rows(), x.cols());
  }
  if (weight) *weight = t;
  return out;
}

ProjectionResult dykstra_ppt_density(const Matrix& h, const Bipartition& cut, int max_iter, double tol) {
  if (h.rows() != total_dim(cut.dims)) throw std::invalid_argument("dykstra_ppt_density: size mismatch");
  Matrix x = hermitian_part(h);
  Matrix p = Matrix::Zero(x.rows(), x.cols()), q = p;
  Matrix y = x;
  std::vector<double> hist;
  double res = 0;
  bool conv = false;
  int it = 0;
  for (; it < max_iter; ++it) {
    Matrix xp = x + p;
    y = gamma(psd_project(gamma(xp, cut)), cut);
    p = xp - y;
    Matrix yq = y + q;
    Matrix xn = density_project(yq);
    q = yq - xn;
    const double step = (xn - x).norm();
    x = std::move(xn);
    res = (x - y).norm();
    hist.push_back(res);
    if (res <= tol && step <= tol) {
      conv = true;
      ++it;
      break;
    }
  }
  Matrix fixed = density_project(x);
  fixed = ppt_mix_fix(fixed, cut);
  return {DensityMatrix(fixed, cut.dims, cut.side_a), it, res, std::move(hist), conv};
}

double lmo_dual_bound(const Matrix& g, const Matrix& z, const Bipartition& cut) {
  return min_eigenvalue(g - gamma(psd_project(z), cut));
}

LmoResult lmo_ppt(const Matrix& g_in, const Bipartition& cut, const LmoOptions& opts, LmoWarmStart* warm) {
  const Eigen::Index n = g_in.rows();
  if (g_in.cols() != n || n != total_dim(cut.dims)) throw std::invalid_argument("lmo_ppt: size mismatch");
  const Matrix id = Matrix::Identity(n, n);
  // Work with a centred, unit-norm cost; Tr sigma = 1 makes the shift exact.
  const Matrix gh = hermitian_part(g_in);
  const double shift = gh.trace().real() / static_cast<double>(n);
  Matrix g = gh - shift * id;
  double scale = g.norm();
  if (scale < 1e-300) scale = 1.0;
  g /= scale;

  Matrix y, u;
  double rho = opts.rho;
  if (warm && warm->valid() && warm->y.rows() == n) {
    y = warm->y;
    u = warm->u;
    rho = warm->rho;
  } else {
    y = id / static_cast<double>(n);
    u = Matrix::Zero(n, n);
  }

  LmoResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.lower = -std::numeric_limits<double>::infinity();
  Matrix best_sigma = id / static_cast<double>(n);
  Matrix best_z = Matrix::Zero(n, n);
  double r_norm = 0, s_norm = 0;
  Matrix x;
  int it = 0;
  bool conv = false;
  for (; it < opts.max_iter; ++it) {
    x = density_project(gamma(Matrix(y - u), cut) - g / rho);
    const Matrix xg = gamma(x, cut);
    const Matrix y_old = y;
    y = psd_project(xg + u);
    u += xg - y;
    r_norm = (xg - y).norm();
    s_norm = rho * (y - y_old).norm();

    const bool last = it + 1 == opts.max_iter;
    if ((it + 1) % opts.check_every == 0 || last) {
      const Matrix sigma = ppt_mix_fix(x, cut);
      const double obj = inner(g, sigma);
      const Matrix zc = psd_project(Matrix(-rho * u));
      const double low = min_eigenvalue(g - gamma(zc, cut));
      if (obj < best.objective) {
        best.objective = obj;
        best_sigma = sigma;
      }
      if (low > best.lower) {
        best.lower = low;
        best_z = zc;
      }
      if (r_norm <= opts.feas_tol && best.objective - best.lower <= opts.obj_tol) {
        conv = true;
        ++it;
        break;
      }
    }
    if (r_norm > 10 * s_norm) {
      rho *= 2;
      u /= 2;
    } else if (s_norm > 10 * r_norm) {
      rho /= 2;
      u *= 2;
    }
  }
  if (warm) {
    warm->y = y;
    warm->u = u;
    warm->rho = rho;
  }
  LmoResult out;
  out.minimizer = best_sigma;
  out.objective = inner(gh, best_sigma);
  out.lower = best.lower * scale + shift;
  out.dual_z = scale * best_z;
  // The dual bound is only as good as the eigensolver; never report a lower
  // bound above the attained value.
  out.lower = std::min(out.lower, out.objective);
  out.primal_residual = r_norm;
  out.dual_residual = s_norm;
  out.iterations = it;
  out.converged = conv;
  return out;
}

}  // namespace resmono
