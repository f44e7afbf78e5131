#include "resmono/sdp.hpp"

#include <cmath>
#include <stdexcept>

#include "resmono/cones.hpp"

namespace resmono {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Pseudo-inverse of a symmetric PSD matrix through its eigendecomposition.
RealMatrix psd_pinv(const RealMatrix& s) {
  const SymEig es = sym_eig(s);
  const RealVector& ev = es.values;
  const double cut = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  RealVector inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) inv(i) = ev(i) > cut ? 1.0 / ev(i) : 0.0;
  return es.vectors * inv.asDiagonal() * es.vectors.transpose();
}

// Solves S v = r for symmetric PSD S: Cholesky when S is well conditioned,
// otherwise the eigendecomposition pseudo-inverse.
class PsdSolve {
 public:
  void factor(const RealMatrix& s) {
    llt_.compute(s);
    use_llt_ = false;
    if (llt_.info() == Eigen::Success) {
      const RealVector d = llt_.matrixLLT().diagonal().cwiseAbs2();
      use_llt_ = d.minCoeff() > 1e-10 * std::max(1.0, d.maxCoeff());
    }
    if (!use_llt_) pinv_ = psd_pinv(s);
  }
  RealVector solve(const RealVector& r) const { return use_llt_ ? RealVector(llt_.solve(r)) : RealVector(pinv_ * r); }

 private:
  Eigen::LLT<RealMatrix> llt_;
  RealMatrix pinv_;
  bool use_llt_ = false;
};

}  // namespace

void herm_to_vec(const Matrix& m, double* out) {
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i) {
    out[i * n + i] = m(i, i).real();
    for (int j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      out[i * n + j] = kSqrt2 * v.real();
      out[j * n + i] = kSqrt2 * v.imag();
    }
  }
}

Matrix vec_to_herm(const double* v, int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = v[i * n + i];
    for (int j = i + 1; j < n; ++j) {
      const Complex z(v[i * n + j] / kSqrt2, v[j * n + i] / kSqrt2);
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

RealVector herm_to_vec(const Matrix& m) {
  RealVector v(m.rows() * m.rows());
  herm_to_vec(m, v.data());
  return v;
}

Matrix vec_to_herm(const RealVector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) throw std::invalid_argument("vec_to_herm: length mismatch");
  return vec_to_herm(v.data(), n);
}

Matrix SdpTransform::apply(const Matrix& m) const {
  if (identity()) return m;
  return partial_transpose(m, dims, subsystems);
}

int SdpProblem::add_block(int n, std::string name) {
  if (n < 1) throw std::invalid_argument("SdpProblem: block size must be positive");
  sizes_.push_back(n);
  names_.push_back(name.empty() ? "x" + std::to_string(sizes_.size() - 1) : std::move(name));
  offsets_.push_back(total_);
  total_ += static_cast<long>(n) * n;
  return static_cast<int>(sizes_.size()) - 1;
}

void SdpProblem::add_cone_row(SdpConeRow row) {
  if (row.terms.empty()) throw std::invalid_argument("SdpProblem: empty cone row");
  const int n = sizes_.at(row.terms[0].block);
  for (const SdpConeTerm& t : row.terms) {
    if (t.block < 0 || t.block >= num_blocks() || sizes_[t.block] != n) {
      throw std::invalid_argument("SdpProblem: cone row mixes block sizes");
    }
  }
  if (!row.transform.identity() && total_dim(row.transform.dims) != n) {
    throw std::invalid_argument("SdpProblem: transform dims do not match block size");
  }
  rows_.push_back(std::move(row));
}

void SdpProblem::add_psd(int block) { add_cone_row({names_.at(block) + ">=0", {{block, 1.0}}, {}}); }

void SdpProblem::add_equality(const std::vector<std::pair<int, Adjoint>>& terms, const Matrix& target,
                              std::string /*name*/, bool trace_implied) {
  const int m = static_cast<int>(target.rows());
  const RealVector tv = herm_to_vec(hermitian_part(target));
  for (int a = 0; a < m; ++a) {
    for (int bcol = 0; bcol < m; ++bcol) {
      if (trace_implied && a == 0 && bcol == 0) continue;
      // Hermitian basis element dual to vector position a*m + bcol.
      Matrix e = Matrix::Zero(m, m);
      if (a == bcol) {
        e(a, a) = 1.0;
      } else if (a < bcol) {
        e(a, bcol) = e(bcol, a) = 1.0 / kSqrt2;
      } else {
        // position (a, bcol) with a > bcol holds sqrt2 Im X(bcol, a)
        e(bcol, a) = Complex(0, 1.0 / kSqrt2);
        e(a, bcol) = Complex(0, -1.0 / kSqrt2);
      }
      const long row = static_cast<long>(b_.size());
      bool any = false;
      for (const auto& [blk, adj] : terms) {
        const Matrix f = adj(e);
        const int n = sizes_.at(blk);
        if (f.rows() != n) throw std::invalid_argument("SdpProblem: adjoint returned wrong size");
        RealVector fv = herm_to_vec(f);
        for (Eigen::Index k = 0; k < fv.size(); ++k) {
          if (std::abs(fv(k)) > 1e-15) {
            a_trip_.emplace_back(row, offsets_[blk] + k, fv(k));
            any = true;
          }
        }
      }
      (void)any;
      b_.push_back(tv(a * m + bcol));
    }
  }
}

void SdpProblem::add_scalar_equality(const std::vector<std::pair<int, Matrix>>& terms, double value) {
  const long row = static_cast<long>(b_.size());
  for (const auto& [blk, f] : terms) {
    RealVector fv = herm_to_vec(hermitian_part(f));
    for (Eigen::Index k = 0; k < fv.size(); ++k)
      if (std::abs(fv(k)) > 1e-15) a_trip_.emplace_back(row, offsets_.at(blk) + k, fv(k));
  }
  b_.push_back(value);
}

void SdpProblem::add_objective(int block, const Matrix& c) {
  if (c.rows() != sizes_.at(block)) throw std::invalid_argument("SdpProblem: objective term has wrong size");
  c_terms_.emplace_back(block, hermitian_part(c));
}

void SdpProblem::add_trace_bound(std::vector<int> blocks, double bound) { trace_bounds_.emplace_back(std::move(blocks), bound); }

SparseMatrix SdpProblem::a_matrix() const {
  SparseMatrix a(static_cast<long>(b_.size()), total_);
  a.setFromTriplets(a_trip_.begin(), a_trip_.end());
  return a;
}

RealVector SdpProblem::c_vector() const {
  RealVector c = RealVector::Zero(total_);
  for (const auto& [blk, m] : c_terms_) {
    c.segment(offsets_[blk], static_cast<long>(sizes_[blk]) * sizes_[blk]) += herm_to_vec(m);
  }
  return c;
}

RealVector SdpProblem::apply_a(const std::vector<Matrix>& x) const {
  RealVector v(total_);
  for (int j = 0; j < num_blocks(); ++j) herm_to_vec(x.at(j), v.data() + offsets_[j]);
  return a_matrix() * v;
}

double SdpProblem::objective(const std::vector<Matrix>& x) const {
  double s = 0;
  for (const auto& [blk, m] : c_terms_) s += inner(m, x.at(blk));
  return s;
}

namespace {

// Everything admm_sdp precomputes from the problem data.
struct Prepared {
  const SdpProblem& p;
  SparseMatrix a;
  SparseMatrix at;
  SparseMatrix dinv;  // (B^*B)^{-1}
  RealVector b;
  RealVector c;
  PsdSolve s_solve;
  PsdSolve aat_solve;
  bool have_aat = false;
  // Per cone row: source index of every entry after the transform (empty
  // for the identity).
  std::vector<std::vector<int>> perms;

  explicit Prepared(const SdpProblem& prob) : p(prob) {
    for (const SdpConeRow& r : p.cone_rows()) {
      std::vector<int> perm;
      if (!r.transform.identity()) {
        const int n = p.block_size(r.terms[0].block);
        Matrix idx(n, n);
        for (int k = 0; k < n * n; ++k) idx.data()[k] = static_cast<double>(k);
        const Matrix moved = r.transform.apply(idx);
        perm.resize(static_cast<std::size_t>(n) * n);
        for (int k = 0; k < n * n; ++k) perm[k] = static_cast<int>(std::lround(moved.data()[k].real()));
      }
      perms.push_back(std::move(perm));
    }
    a = p.a_matrix();
    at = a.transpose();
    b = Eigen::Map<const RealVector>(p.b().data(), static_cast<long>(p.b().size()));
    c = p.c_vector();
    const int nb = p.num_blocks();
    RealMatrix m = RealMatrix::Zero(nb, nb);
    for (const SdpConeRow& r : p.cone_rows())
      for (const SdpConeTerm& t1 : r.terms)
        for (const SdpConeTerm& t2 : r.terms) m(t1.block, t2.block) += t1.coef * t2.coef;
    Eigen::LLT<RealMatrix> llt(m);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("admm_sdp: every block must enter the cone rows (B^*B singular)");
    const RealMatrix minv = llt.solve(RealMatrix::Identity(nb, nb));
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k) {
        if (p.block_size(j) != p.block_size(k) || std::abs(minv(j, k)) < 1e-300) continue;
        const long len = static_cast<long>(p.block_size(j)) * p.block_size(j);
        for (long q = 0; q < len; ++q) trip.emplace_back(p.offset(j) + q, p.offset(k) + q, minv(j, k));
      }
    dinv.resize(p.num_vars(), p.num_vars());
    dinv.setFromTriplets(trip.begin(), trip.end());
    if (a.rows() > 0) {
      SparseMatrix ad = a * dinv;
      SparseMatrix s = ad * at;
      s_solve.factor(RealMatrix(s));
    }
  }

  const PsdSolve& aat() {
    if (!have_aat) {
      if (a.rows() > 0) aat_solve.factor(RealMatrix(SparseMatrix(a * at)));
      have_aat = true;
    }
    return aat_solve;
  }

  std::vector<Matrix> blocks(const RealVector& v) const {
    std::vector<Matrix> out;
    for (int j = 0; j < p.num_blocks(); ++j) out.push_back(vec_to_herm(v.data() + p.offset(j), p.block_size(j)));
    return out;
  }

  RealVector flatten(const std::vector<Matrix>& x) const {
    RealVector v(p.num_vars());
    for (int j = 0; j < p.num_blocks(); ++j) herm_to_vec(x[j], v.data() + p.offset(j));
    return v;
  }

  // Partial transposes are involutions, so the same map serves B and B^*.
  Matrix transform(std::size_t k, const Matrix& m) const {
    const std::vector<int>& perm = perms[k];
    if (perm.empty()) return m;
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) out.data()[i] = m.data()[perm[i]];
    return out;
  }

  std::vector<Matrix> apply_b(const std::vector<Matrix>& x) const {
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < p.cone_rows().size(); ++k) {
      const SdpConeRow& r = p.cone_rows()[k];
      Matrix s = r.terms[0].coef * x[r.terms[0].block];
      for (std::size_t t = 1; t < r.terms.size(); ++t) s += r.terms[t].coef * x[r.terms[t].block];
      out.push_back(transform(k, s));
    }
    return out;
  }

  std::vector<Matrix> apply_bt(const std::vector<Matrix>& rows) const {
    std::vector<Matrix> out;
    for (int j = 0; j < p.num_blocks(); ++j) out.push_back(Matrix::Zero(p.block_size(j), p.block_size(j)));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const SdpConeRow& r = p.cone_rows()[k];
      const Matrix w = transform(k, rows[k]);
      for (const SdpConeTerm& t : r.terms) out[t.block] += t.coef * w;
    }
    return out;
  }
};

double op_norm(const Matrix& m) {
  const RealVector ev = herm_eigenvalues(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double upper_from_dual(Prepared& pr, const RealVector& y, const std::vector<Matrix>& zc) {
  // R = A^* y - B^* Z - c
  RealVector r = -pr.c;
  if (y.size() > 0) r += pr.at * y;
  r -= pr.flatten(pr.apply_bt(zc));
  const std::vector<Matrix> rb = pr.blocks(r);
  std::vector<bool> covered(rb.size(), false);
  double ub = y.size() > 0 ? pr.b.dot(y) : 0.0;
  for (const auto& [blocks, bound] : pr.p.trace_bounds()) {
    double mx = 0;
    for (int j : blocks) {
      mx = std::max(mx, op_norm(rb[j]));
      covered[j] = true;
    }
    ub += bound * mx;
  }
  for (std::size_t j = 0; j < rb.size(); ++j) {
    if (!covered[j] && rb[j].cwiseAbs().maxCoeff() > 0) return std::numeric_limits<double>::infinity();
  }
  return ub;
}

}  // namespace

double certified_upper_bound(const SdpProblem& problem, const std::vector<double>& y, const std::vector<Matrix>& dual_cones) {
  Prepared pr(problem);
  if (dual_cones.size() != problem.cone_rows().size()) throw std::invalid_argument("certified_upper_bound: one dual matrix per cone row");
  std::vector<Matrix> zc;
  for (const Matrix& z : dual_cones) zc.push_back(psd_project(z));
  RealVector yv = Eigen::Map<const RealVector>(y.data(), static_cast<long>(y.size()));
  if (yv.size() != pr.b.size()) throw std::invalid_argument("certified_upper_bound: y has wrong length");
  return upper_from_dual(pr, yv, zc);
}

SdpSolution admm_sdp(const SdpProblem& problem, const SdpOptions& opts) {
  Prepared pr(problem);
  const std::size_t nrows = problem.cone_rows().size();
  SdpSolution sol;
  double rho = opts.rho;
  std::vector<Matrix> z, u;
  const bool warm = opts.warm && opts.warm->z.size() == nrows && opts.warm->u.size() == nrows;
  for (std::size_t k = 0; k < nrows; ++k) {
    const int n = problem.block_size(problem.cone_rows()[k].terms[0].block);
    if (warm && opts.warm->z[k].rows() == n) {
      z.push_back(opts.warm->z[k]);
      u.push_back(opts.warm->u[k]);
    } else {
      z.push_back(Matrix::Zero(n, n));
      u.push_back(Matrix::Zero(n, n));
    }
  }
  if (warm) rho = opts.warm->rho;

  const double b_scale = std::max(1.0, pr.b.norm());
  const double c_scale = std::max(1.0, pr.c.norm());
  RealVector x;
  std::vector<Matrix> xb, bx;
  double r_rel = 0, s_rel = 0;
  int it = 0;
  sol.status = "iteration cap reached";
  for (; it < opts.max_iter; ++it) {
    std::vector<Matrix> zu(nrows);
    for (std::size_t k = 0; k < nrows; ++k) zu[k] = z[k] - u[k];
    RealVector rhs = pr.c / rho + pr.flatten(pr.apply_bt(zu));
    RealVector w = pr.dinv * rhs;
    if (pr.a.rows() > 0) {
      RealVector res = pr.a * w - pr.b;
      x = w - pr.dinv * (pr.at * pr.s_solve.solve(res));
    } else {
      x = w;
    }
    if (it == 0) {
      sol.affine_residual = pr.a.rows() > 0 ? (pr.a * x - pr.b).norm() : 0.0;
      if (sol.affine_residual > 1e-8 * b_scale) {
        sol.infeasible = true;
        sol.status = "equality constraints are inconsistent";
        break;
      }
    }
    xb = pr.blocks(x);
    bx = pr.apply_b(xb);
    double r2 = 0, bxn = 0, zn = 0;
    std::vector<Matrix> dz(nrows);
    for (std::size_t k = 0; k < nrows; ++k) {
      const Matrix zold = z[k];
      const Matrix v = opts.alpha * bx[k] + (1 - opts.alpha) * zold;
      z[k] = psd_project(v + u[k]);
      u[k] += v - z[k];
      r2 += (bx[k] - z[k]).squaredNorm();
      bxn += bx[k].squaredNorm();
      zn += z[k].squaredNorm();
      dz[k] = z[k] - zold;
    }
    const double r_norm = std::sqrt(r2);
    double s_norm = 0;
    for (const Matrix& m : pr.apply_bt(dz)) s_norm += m.squaredNorm();
    s_norm = rho * std::sqrt(s_norm);
    double un = 0;
    for (std::size_t k = 0; k < nrows; ++k) un += u[k].squaredNorm();
    un = rho * std::sqrt(un);
    r_rel = r_norm / std::max({1.0, std::sqrt(bxn), std::sqrt(zn)});
    s_rel = s_norm / std::max(c_scale, un);

    if (un > 1e12) {
      sol.infeasible = true;
      sol.status = "dual iterates diverge";
      ++it;
      break;
    }

    const bool check = (it + 1) % opts.check_every == 0 || it + 1 == opts.max_iter;
    if (check) {
      std::vector<Matrix> zc(nrows);
      for (std::size_t k = 0; k < nrows; ++k) zc[k] = psd_project(Matrix(-rho * u[k]));
      RealVector y;
      if (pr.a.rows() > 0) y = pr.aat().solve(pr.a * (pr.c + pr.flatten(pr.apply_bt(zc))));
      const double ub = upper_from_dual(pr, y, zc);
      const double pobj = pr.c.dot(x);
      if (ub < sol.upper) {
        sol.upper = ub;
        sol.y.assign(y.data(), y.data() + y.size());
        sol.dual_cones = zc;
        sol.dual_objective = y.size() ? pr.b.dot(y) : 0.0;
      }
      const double gap = (sol.upper - pobj) / std::max(1.0, std::abs(sol.upper) + std::abs(pobj));
      if (opts.on_check) opts.on_check({it + 1, r_rel, s_rel, gap, sol.upper, pobj, rho});
      if (r_rel <= opts.tol && s_rel <= opts.tol && gap <= opts.tol) {
        sol.converged = true;
        sol.status = "converged";
        ++it;
        break;
      }
      if (sol.upper <= opts.stop_if_upper_below) {
        sol.status = "certified upper bound below target";
        ++it;
        break;
      }
      if (r_rel <= opts.tol && pobj >= opts.stop_if_primal_above) {
        sol.status = "primal objective above target";
        ++it;
        break;
      }
    }
    if (opts.residual_balancing) {
      if (r_rel > 10 * s_rel) {
        rho *= 2;
        for (Matrix& m : u) m /= 2;
      } else if (s_rel > 10 * r_rel) {
        rho /= 2;
        for (Matrix& m : u) m *= 2;
      }
    }
  }
  sol.iterations = it;
  sol.rho = rho;
  if (x.size() == 0) x = RealVector::Zero(problem.num_vars());
  sol.x = pr.blocks(x);
  sol.z = z;
  sol.u = u;
  sol.primal_objective = pr.c.dot(x);
  sol.primal_residual = r_rel;
  sol.dual_residual = s_rel;
  if (pr.a.rows() > 0) sol.affine_residual = (pr.a * x - pr.b).norm();
  return sol;
}

}  // namespace resmono
