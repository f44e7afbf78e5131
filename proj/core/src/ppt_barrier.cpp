#include "ppt_barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "resmono/cones.hpp"
#include "resmono/sdp.hpp"

namespace resmono::detail {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Writes vec(M) for the Hermitian M = alpha x y^dag + conj(alpha) y x^dag.
void vec_of_sym_outer(Complex alpha, const Complex* x, const Complex* y, int n, double* out) {
  constexpr double kSqrt2 = 1.41421356237309504880;
  for (int i = 0; i < n; ++i) {
    const Complex ax = alpha * x[i], ay = std::conj(alpha) * y[i];
    out[i * n + i] = 2.0 * (ax * std::conj(y[i])).real();
    for (int j = i + 1; j < n; ++j) {
      const Complex m = ax * std::conj(y[j]) + ay * std::conj(x[j]);
      out[i * n + j] = kSqrt2 * m.real();
      out[j * n + i] = kSqrt2 * m.imag();
    }
  }
}

// Columns of the Hessian of -log det X in the vec basis: vec(S E_k S) with
// S = X^{-1}. Each basis element has at most two nonzeros, so every column
// is a sum of two outer products of columns of S.
RealMatrix logdet_hessian(const Matrix& s) {
  const int n = static_cast<int>(s.rows());
  const int nn = n * n;
  RealMatrix h(nn, nn);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double* col = h.col(a * n + b).data();
      if (a == b) {
        vec_of_sym_outer(0.5, s.col(a).data(), s.col(a).data(), n, col);
      } else if (a < b) {
        vec_of_sym_outer(kInvSqrt2, s.col(a).data(), s.col(b).data(), n, col);
      } else {
        // E(b, a) = i/sqrt2, E(a, b) = -i/sqrt2.
        vec_of_sym_outer(Complex(0, kInvSqrt2), s.col(b).data(), s.col(a).data(), n, col);
      }
    }
  }
  return h;
}

struct SignedPerm {
  std::vector<int> idx;
  std::vector<double> sign;
};

// Gamma maps basis element k to sign[k] * basis element idx[k].
SignedPerm gamma_perm(const Bipartition& cut) {
  const int n = total_dim(cut.dims);
  const int nn = n * n;
  SignedPerm p{std::vector<int>(nn), std::vector<double>(nn)};
  RealVector e = RealVector::Zero(nn);
  for (int k = 0; k < nn; ++k) {
    e.setZero();
    e(k) = 1;
    const RealVector g = herm_to_vec(gamma(vec_to_herm(e, n), cut));
    Eigen::Index at = 0;
    g.cwiseAbs().maxCoeff(&at);
    p.idx[k] = static_cast<int>(at);
    p.sign[k] = g(at) > 0 ? 1.0 : -1.0;
  }
  return p;
}

struct LogdetTerm {
  double value = 0;
  Matrix inv;  // X^{-1}
  bool ok = false;
};

LogdetTerm logdet_term(const Matrix& x) {
  LogdetTerm t;
  HermEig e = herm_eig(x);
  if (e.values.minCoeff() <= 0) return t;
  t.value = -e.values.array().log().sum();
  t.inv = hermitian_part(e.vectors * e.values.cwiseInverse().cast<Complex>().asDiagonal() * e.vectors.adjoint());
  t.ok = true;
  return t;
}

struct Eval {
  bool ok = false;
  double phi = 0;
  double obj = 0;
  RealVector g;
  RealMatrix h;
  // Pieces reused by the dual output.
  Matrix gamma_inv;
  std::vector<double> slack;
};

class Evaluator {
 public:
  Evaluator(const BarrierObjective& obj, const Bipartition& cut) : obj_(obj), cut_(cut) {
    n_ = total_dim(cut.dims);
    nn_ = n_ * n_;
    measured_ = obj.kind == BarrierObjective::Kind::kMeasured;
    dim_ = nn_ + (measured_ ? 1 : 0);
    perm_ = gamma_perm(cut);
    if (measured_) {
      for (std::size_t j = 0; j < obj.effects.size(); ++j) {
        // Only outcomes with p > 0 enter the objective.
        std::vector<int> keep;
        for (std::size_t o = 0; o < obj.effects[j].size(); ++o)
          if (obj.p[j][o] > 0) keep.push_back(static_cast<int>(o));
        RealMatrix f(nn_, static_cast<Eigen::Index>(keep.size()));
        RealVector pv(static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c) {
          herm_to_vec(obj.effects[j][keep[c]], f.col(static_cast<Eigen::Index>(c)).data());
          pv(static_cast<Eigen::Index>(c)) = obj.p[j][keep[c]];
        }
        fmat_.push_back(std::move(f));
        pvec_.push_back(std::move(pv));
      }
    }
  }

  int dim() const { return dim_; }
  int n() const { return n_; }
  int barrier_weight() const { return 2 * n_ + (measured_ ? static_cast<int>(obj_.effects.size()) : 0); }

  Matrix sigma(const RealVector& x) const { return vec_to_herm(x.data(), n_); }

  Eval eval(const RealVector& x, double tau, bool derivs) const {
    Eval ev;
    const Matrix s = sigma(x);
    LogdetTerm ls = logdet_term(s);
    if (!ls.ok) return ev;
    const Matrix y = gamma(s, cut_);
    LogdetTerm ly = logdet_term(y);
    if (!ly.ok) return ev;
    ev.phi = ls.value + ly.value;
    if (derivs) {
      ev.g = RealVector::Zero(dim_);
      ev.h = RealMatrix::Zero(dim_, dim_);
      ev.g.head(nn_) = -herm_to_vec(ls.inv) - herm_to_vec(gamma(ly.inv, cut_));
      ev.h.topLeftCorner(nn_, nn_) = logdet_hessian(ls.inv);
      const RealMatrix hy = logdet_hessian(ly.inv);
      for (int k = 0; k < nn_; ++k) {
        for (int l = 0; l < nn_; ++l) {
          ev.h(k, l) += perm_.sign[k] * perm_.sign[l] * hy(perm_.idx[k], perm_.idx[l]);
        }
      }
      ev.gamma_inv = ly.inv;
    }
    if (!measured_) {
      if (!ree_part(s, tau, derivs, ev)) return ev;
    } else {
      if (!measured_part(x, s, tau, derivs, ev)) return ev;
    }
    ev.ok = true;
    return ev;
  }

 private:
  bool ree_part(const Matrix& s, double tau, bool derivs, Eval& ev) const {
    HermEig e = herm_eig(s);
    const RealVector& lam = e.values;
    if (lam.minCoeff() <= 0) return false;
    const Matrix rt = e.vectors.adjoint() * obj_.rho * e.vectors;
    double tr = 0;
    for (int i = 0; i < n_; ++i) tr += rt(i, i).real() * std::log2(lam(i));
    ev.obj = -obj_.rho_entropy - tr;
    ev.phi += tau * ev.obj;
    if (!derivs) return true;
    Matrix f1(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) f1(i, j) = log2_dd1(lam(i), lam(j));
    const Matrix grad = -(e.vectors * rt.cwiseProduct(f1) * e.vectors.adjoint());
    ev.g.head(nn_) += tau * herm_to_vec(hermitian_part(grad));

    // Hessian of -Tr rho log2 sigma: direction D -> -U (K1 + K1^dag) U^dag with
    // K1_kj = sum_i f2_ijk rt_ki Dt_ij and Dt = U^dag D U. For fixed j this is
    // K1(:, j) = M_j Dt(:, j) with M_j(k, i) = f2_ijk rt_ki, so columns of the
    // Hessian are processed in batches as one product per j.
    std::vector<Matrix> mj(n_, Matrix(n_, n_));
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i) mj[j](k, i) = log2_dd2(lam(i), lam(j), lam(k)) * rt(k, i);
    const Matrix ua = e.vectors.adjoint();
    const int batch = std::min(nn_, 256);
    std::vector<Matrix> dcols(n_, Matrix(n_, batch));
    Matrix dt(n_, n_), k1(n_, n_), m(n_, n_);
    RealVector hv(nn_);
    for (int c0 = 0; c0 < nn_; c0 += batch) {
      const int cn = std::min(batch, nn_ - c0);
      for (int c = 0; c < cn; ++c) {
        const int a = (c0 + c) / n_, b = (c0 + c) % n_;
        if (a == b) {
          dt.noalias() = ua.col(a) * ua.col(a).adjoint();
        } else if (a < b) {
          dt.noalias() = kInvSqrt2 * (ua.col(a) * ua.col(b).adjoint() + ua.col(b) * ua.col(a).adjoint());
        } else {
          const Complex iu(0, kInvSqrt2);
          dt.noalias() = iu * (ua.col(b) * ua.col(a).adjoint()) - iu * (ua.col(a) * ua.col(b).adjoint());
        }
        for (int j = 0; j < n_; ++j) dcols[j].col(c) = dt.col(j);
      }
      std::vector<Matrix> kcols(n_);
      for (int j = 0; j < n_; ++j) kcols[j].noalias() = mj[j] * dcols[j].leftCols(cn);
      for (int c = 0; c < cn; ++c) {
        for (int j = 0; j < n_; ++j) k1.col(j) = kcols[j].col(c);
        m.noalias() = e.vectors * (k1 + k1.adjoint()) * ua;
        herm_to_vec(m, hv.data());
        ev.h.col(c0 + c).head(nn_) -= tau * hv;
      }
    }
    // Symmetrize rounding.
    ev.h = 0.5 * (ev.h + ev.h.transpose()).eval();
    return true;
  }

  bool measured_part(const RealVector& x, const Matrix& s, double tau, bool derivs, Eval& ev) const {
    const double t = x(nn_);
    const RealVector sv = x.head(nn_);
    ev.obj = t;
    ev.phi += tau * t;
    if (derivs) ev.g(nn_) += tau;
    ev.slack.clear();
    for (std::size_t j = 0; j < fmat_.size(); ++j) {
      const RealMatrix& f = fmat_[j];
      const RealVector& p = pvec_[j];
      const RealVector q = f.transpose() * sv;
      if (q.size() > 0 && q.minCoeff() <= 0) return false;
      const double kl = (p.array() * (p.array() / q.array()).log()).sum() / kLn2;
      const double sl = t - kl;
      if (sl <= 0) return false;
      ev.slack.push_back(sl);
      ev.phi -= std::log(sl);
      if (!derivs) continue;
      RealVector w = RealVector::Zero(dim_);
      const RealVector r = (p.array() / (q.array() * kLn2)).matrix();
      w.head(nn_).noalias() = -(f * r);
      w(nn_) = -1;
      ev.g += w / sl;
      const RealVector c = (p.array() / (q.array() * q.array() * kLn2 * sl)).sqrt().matrix();
      const RealMatrix fc = f * c.asDiagonal();
      ev.h.topLeftCorner(nn_, nn_).selfadjointView<Eigen::Lower>().rankUpdate(fc);
      ev.h.noalias() += (w * w.transpose()) / (sl * sl);
    }
    if (derivs) ev.h.triangularView<Eigen::StrictlyUpper>() = ev.h.transpose();
    (void)s;
    return true;
  }

  const BarrierObjective& obj_;
  const Bipartition& cut_;
  int n_ = 0, nn_ = 0, dim_ = 0;
  bool measured_ = false;
  SignedPerm perm_;
  std::vector<RealMatrix> fmat_;
  std::vector<RealVector> pvec_;
};

}  // namespace

double log2_dd1(double a, double b) {
  if (a == b) return 1.0 / (a * kLn2);
  const double x = (a - b) / b;
  if (std::abs(x) < 1e-8) return (1.0 - 0.5 * x) / (b * kLn2);
  return std::log1p(x) / ((a - b) * kLn2);
}

double log2_dd2(double a, double b, double c) {
  double v[3] = {a, b, c};
  std::sort(v, v + 3);
  const double lo = v[0], mid = v[1], hi = v[2];
  if (hi - lo <= 1e-6 * hi) {
    const double m = (a + b + c) / 3.0;
    return -1.0 / (2.0 * m * m * kLn2);
  }
  return (log2_dd1(hi, mid) - log2_dd1(mid, lo)) / (hi - lo);
}

double barrier_objective_value(const BarrierObjective& obj, const Matrix& sigma) {
  if (obj.kind == BarrierObjective::Kind::kRee) {
    HermEig e = herm_eig(sigma);
    const Matrix rt = e.vectors.adjoint() * obj.rho * e.vectors;
    double tr = 0;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
      if (rt(i, i).real() == 0) continue;
      if (e.values(i) <= 0) return std::numeric_limits<double>::infinity();
      tr += rt(i, i).real() * std::log2(e.values(i));
    }
    return -obj.rho_entropy - tr;
  }
  double best = 0;
  for (std::size_t j = 0; j < obj.effects.size(); ++j) {
    double kl = 0;
    for (std::size_t o = 0; o < obj.effects[j].size(); ++o) {
      const double p = obj.p[j][o];
      if (p <= 0) continue;
      const double q = inner(obj.effects[j][o], sigma);
      if (q <= 0) return std::numeric_limits<double>::infinity();
      kl += p * std::log2(p / q);
    }
    best = std::max(best, kl);
  }
  return best;
}

BarrierResult ppt_barrier_solve_impl(const BarrierObjective& obj, const Bipartition& cut, const Matrix& start,
                                     const BarrierOptions& opts, double (*cb)(void*, const BarrierResult&), void* ctx) {
  Evaluator ev(obj, cut);
  const int n = ev.n();
  const int nn = n * n;
  const int dim = ev.dim();
  const bool measured = obj.kind == BarrierObjective::Kind::kMeasured;

  RealVector x(dim);
  herm_to_vec(hermitian_part(start), x.data());
  if (measured) x(nn) = barrier_objective_value(obj, start) + 1.0;
  RealVector a = RealVector::Zero(dim);
  for (int i = 0; i < n; ++i) a(i * n + i) = 1.0;

  double tau = opts.tau0;
  BarrierResult res;
  res.tau = tau;
  {
    Eval e0 = ev.eval(x, tau, false);
    if (!e0.ok) throw std::invalid_argument("ppt_barrier_solve: start point is not strictly feasible");
  }

  int steps = 0;
  while (true) {
    bool centered = false;
    for (int inner_it = 0; inner_it < 60 && steps < opts.max_newton; ++inner_it) {
      Eval e = ev.eval(x, tau, true);
      ++steps;
      Eigen::LLT<RealMatrix> llt(e.h);
      RealMatrix hreg;
      if (llt.info() != Eigen::Success) {
        hreg = e.h;
        hreg.diagonal().array() += 1e-12 * (1.0 + e.h.diagonal().cwiseAbs().maxCoeff());
        llt.compute(hreg);
        if (llt.info() != Eigen::Success) break;
      }
      const RealVector hg = llt.solve(e.g);
      const RealVector ha = llt.solve(a);
      const double w = -a.dot(hg) / a.dot(ha);
      const RealVector dx = -(hg + w * ha);
      const double dec = -e.g.dot(dx);
      if (dec / 2 <= 1e-10) {
        centered = true;
        break;
      }
      double alpha = 1.0;
      bool moved = false;
      const double slack_tol = 1e-13 * std::max(1.0, std::abs(e.phi));
      while (alpha > 1e-12) {
        const RealVector xn = x + alpha * dx;
        Eval en = ev.eval(xn, tau, false);
        if (en.ok && en.phi <= e.phi - 0.25 * alpha * dec + slack_tol) {
          x = xn;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) {
        // Stalled at working precision: treat as centred.
        centered = true;
        break;
      }
    }
    Eval e = ev.eval(x, tau, true);
    res.sigma = ev.sigma(x);
    res.t = measured ? x(nn) : e.obj;
    res.tau = tau;
    res.newton_steps = steps;
    res.centered = centered;
    res.z = e.gamma_inv / tau;
    res.lambda.clear();
    if (measured) {
      double tot = 0;
      for (double sl : e.slack) {
        res.lambda.push_back(1.0 / (tau * sl));
        tot += res.lambda.back();
      }
      for (double& l : res.lambda) l /= tot;
    }
    const double width = cb ? cb(ctx, res) : std::numeric_limits<double>::infinity();
    if (width <= opts.width_tol) break;
    if (ev.barrier_weight() / tau <= opts.target_gap) break;
    if (steps >= opts.max_newton) break;
    tau *= opts.mu;
  }
  return res;
}

}  // namespace resmono::detail
