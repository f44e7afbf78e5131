#include "resmono/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace resmono {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }
}

void require_dims(const Matrix& m, const Dims& dims, const char* what) {
  require_square(m, what);
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument(std::string(what) + ": non-positive dimension");
  }
  if (total_dim(dims) != m.rows()) {
    throw std::invalid_argument(std::string(what) + ": dims do not match matrix size");
  }
}

// Row-major strides for a multi-index over `dims`.
std::vector<long> strides_of(const Dims& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

int total_dim(const Dims& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return static_cast<int>(p);
}

Matrix HermEig::reconstruct() const {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

SymEig sym_eig(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

HermEig herm_eig(const Matrix& m) {
  require_square(m, "herm_eig");
  HermEig out;
  const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  if (scale > 0) out.asymmetry = (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver did not converge");
  }
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

RealVector herm_eigenvalues(const Matrix& m) {
  require_square(m, "herm_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("herm_eigenvalues: eigensolver did not converge");
  }
  return es.eigenvalues();
}

double min_eigenvalue(const Matrix& m) { return herm_eigenvalues(m)(0); }

double max_eigenvalue(const Matrix& m) {
  RealVector v = herm_eigenvalues(m);
  return v(v.size() - 1);
}

Matrix matrix_fn(const Matrix& m, MatrixFunction fn) {
  HermEig e = herm_eig(m);
  RealVector f(e.values.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double x = e.values(i);
    switch (fn) {
      case MatrixFunction::kLog2:
        if (!(x > 0)) throw std::domain_error("matrix_fn: log2 of non-positive eigenvalue");
        f(i) = std::log2(x);
        break;
      case MatrixFunction::kExp2:
        f(i) = std::exp2(x);
        break;
      case MatrixFunction::kXLog2X:
        if (x < -1e-10) throw std::domain_error("matrix_fn: xlog2x of negative eigenvalue");
        f(i) = x > 0 ? x * std::log2(x) : 0.0;
        break;
    }
  }
  return e.vectors * f.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

Matrix log_gradient(const Matrix& rho, const Matrix& sigma) {
  require_square(rho, "log_gradient");
  require_square(sigma, "log_gradient");
  if (rho.rows() != sigma.rows()) throw std::invalid_argument("log_gradient: size mismatch");
  HermEig e = herm_eig(sigma);
  const Eigen::Index n = e.values.size();
  if (!(e.values(0) > 1e-12)) throw std::domain_error("log_gradient: sigma is singular");
  // Divided differences of log2. When two eigenvalues are close the naive
  // quotient loses digits, so use log1p of the relative gap instead.
  RealMatrix dd(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = e.values(i), b = e.values(j);
      if (i == j || a == b) {
        dd(i, j) = 1.0 / (a * kLn2);
      } else {
        const double r = (a - b) / b;
        dd(i, j) = std::log1p(r) / ((a - b) * kLn2);
      }
    }
  }
  Matrix r = e.vectors.adjoint() * rho * e.vectors;
  Matrix g = r.cwiseProduct(dd.cast<Complex>());
  return hermitian_part(e.vectors * g * e.vectors.adjoint());
}

Matrix partial_trace(const Matrix& m, const Dims& dims, const std::vector<int>& keep) {
  require_dims(m, dims, "partial_trace");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n || kept[k]) throw std::invalid_argument("partial_trace: bad keep index");
    kept[k] = true;
  }
  Dims kd, td;
  std::vector<int> kidx, tidx;
  for (int k = 0; k < n; ++k) {
    if (kept[k]) { kd.push_back(dims[k]); kidx.push_back(k); }
    else { td.push_back(dims[k]); tidx.push_back(k); }
  }
  const int dk = total_dim(kd), dt = total_dim(td);
  // Move kept factors to the front, then sum the diagonal blocks.
  std::vector<int> order(kidx);
  order.insert(order.end(), tidx.begin(), tidx.end());
  Matrix p = permute_subsystems(m, dims, order);
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i) {
    for (int j = 0; j < dk; ++j) {
      Complex s = 0;
      for (int t = 0; t < dt; ++t) s += p(i * dt + t, j * dt + t);
      out(i, j) = s;
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& m, const Dims& dims, const std::vector<int>& subsystems) {
  require_dims(m, dims, "partial_transpose");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> flip(n, false);
  for (int k : subsystems) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_transpose: bad subsystem index");
    flip[k] = true;
  }
  const std::vector<long> st = strides_of(dims);
  const long dim = m.rows();
  Matrix out(dim, dim);
  std::vector<int> ri(n), ci(n);
  for (long r = 0; r < dim; ++r) {
    long rem = r;
    for (int k = 0; k < n; ++k) { ri[k] = static_cast<int>(rem / st[k]); rem %= st[k]; }
    for (long c = 0; c < dim; ++c) {
      long rem2 = c;
      long r2 = 0, c2 = 0;
      for (int k = 0; k < n; ++k) {
        ci[k] = static_cast<int>(rem2 / st[k]);
        rem2 %= st[k];
        if (flip[k]) { r2 += ci[k] * st[k]; c2 += ri[k] * st[k]; }
        else { r2 += ri[k] * st[k]; c2 += ci[k] * st[k]; }
      }
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& m, std::pair<int, int> dims, int subsystem) {
  if (subsystem != 0 && subsystem != 1) throw std::invalid_argument("partial_transpose: subsystem must be 0 or 1");
  return partial_transpose(m, Dims{dims.first, dims.second}, std::vector<int>{subsystem});
}

namespace {

std::vector<long> permutation_map(const Dims& dims, const std::vector<int>& order) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("permute_subsystems: order size mismatch");
  std::vector<bool> seen(n, false);
  for (int k : order) {
    if (k < 0 || k >= n || seen[k]) throw std::invalid_argument("permute_subsystems: order is not a permutation");
    seen[k] = true;
  }
  Dims nd(n);
  for (int k = 0; k < n; ++k) nd[k] = dims[order[k]];
  const std::vector<long> so = strides_of(dims), sn = strides_of(nd);
  const long dim = total_dim(dims);
  // map[new index] = old index
  std::vector<long> map(dim);
  for (long i = 0; i < dim; ++i) {
    long rem = i, old = 0;
    for (int k = 0; k < n; ++k) {
      const long digit = rem / sn[k];
      rem %= sn[k];
      old += digit * so[order[k]];
    }
    map[i] = old;
  }
  return map;
}

}  // namespace

Matrix permute_subsystems(const Matrix& m, const Dims& dims, const std::vector<int>& order) {
  require_dims(m, dims, "permute_subsystems");
  const std::vector<long> map = permutation_map(dims, order);
  const long dim = m.rows();
  Matrix out(dim, dim);
  for (long j = 0; j < dim; ++j)
    for (long i = 0; i < dim; ++i) out(i, j) = m(map[i], map[j]);
  return out;
}

Vector permute_subsystems(const Vector& v, const Dims& dims, const std::vector<int>& order) {
  if (total_dim(dims) != v.size()) throw std::invalid_argument("permute_subsystems: dims do not match vector size");
  const std::vector<long> map = permutation_map(dims, order);
  Vector out(v.size());
  for (long i = 0; i < v.size(); ++i) out(i) = v(map[i]);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

double trace_norm(const Matrix& m) {
  if (m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    return herm_eigenvalues(m).cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double frobenius(const Matrix& m) { return m.norm(); }

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

double inner(const Matrix& a, const Matrix& b) { return a.conjugate().cwiseProduct(b).sum().real(); }

}  // namespace resmono
