#include "resmono/ree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "ppt_barrier.hpp"
#include "resmono/divergences.hpp"

namespace resmono {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix floored(const Matrix& s, double eps) {
  const Eigen::Index n = s.rows();
  return (1 - eps) * s + (eps / static_cast<double>(n)) * Matrix::Identity(n, n);
}

// Rounding allowance for lambda_min of an explicit matrix.
double eig_slack(const Matrix& w) { return 1e-12 * (1.0 + w.norm()); }

detail::BarrierObjective ree_objective(const DensityMatrix& rho) {
  detail::BarrierObjective o;
  o.kind = detail::BarrierObjective::Kind::kRee;
  o.rho = rho.matrix();
  o.rho_entropy = vn_entropy(rho);
  return o;
}

// f(sigma0) - <grad, sigma0> + lambda_min(grad - psd(z)^Gamma), grad = -G.
double ree_linear_bound(const DensityMatrix& rho, double f0, const Matrix& sigma0, const Matrix& z) {
  const Matrix w = -log_gradient(rho.matrix(), sigma0);
  const Matrix m = w - gamma(psd_project(z), rho.bipartition());
  return f0 - inner(w, sigma0) + min_eigenvalue(m) - eig_slack(m);
}

double ree_value(const DensityMatrix& rho, const Matrix& sigma) {
  return umegaki(rho.matrix(), sigma).as_double();
}

}  // namespace

BoundInterval BoundInterval::scaled(double s) const {
  BoundInterval b = *this;
  b.lower *= s;
  b.upper *= s;
  b.fw_gap *= s;
  for (double& v : b.upper_history) v *= s;
  return b;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kCertified:
      return "certified";
    case CheckStatus::kInconclusive:
      return "interval-inconclusive";
    case CheckStatus::kViolated:
      return "violated";
  }
  return "?";
}

double ree_certificate_lower(const DensityMatrix& rho, const LinearizationCertificate& cert) {
  if (cert.empty()) return 0.0;
  const double f0 = ree_value(rho, cert.point);
  return std::max(0.0, ree_linear_bound(rho, f0, cert.point, cert.z));
}

double ree_certificate_upper(const DensityMatrix& rho, const Matrix& sigma, double ppt_tol) {
  if (sigma.rows() != rho.dim()) return kInf;
  if (std::abs(sigma.trace().real() - 1) > 1e-9) return kInf;
  if (min_eigenvalue(sigma) < -ppt_tol || !is_ppt(sigma, rho.bipartition(), ppt_tol)) return kInf;
  return ree_value(rho, sigma);
}

BoundInterval ree_ppt(const DensityMatrix& rho, const ReeOptions& opts, const Matrix* warm) {
  if (!rho.has_cut()) throw std::invalid_argument("ree_ppt: state has no bipartition");
  if (!(opts.eps_floor > 0 && opts.eps_floor <= 1e-3)) throw std::invalid_argument("ree_ppt: eps_floor must lie in (0, 1e-3]");
  const Bipartition cut = rho.bipartition();
  const int n = rho.dim();
  const Matrix id = Matrix::Identity(n, n);
  BoundInterval out;
  out.lower = 0.0;

  auto accept_upper = [&](const Matrix& s, double v) {
    if (v < out.upper) {
      out.upper = v;
      out.upper_certificate = s;
    }
    out.upper_history.push_back(out.upper);
  };

  // PPT input: rho itself (or a tiny mixture of it) is feasible.
  if (min_pt_eigenvalue(rho.matrix(), cut) >= -1e-9) {
    const Matrix s = ppt_mix_fix(rho.matrix(), cut);
    accept_upper(s, ree_value(rho, s));
    out.fw_gap = 0.0;
    out.lower_certificate = "nonnegativity of relative entropy";
    if (out.width() <= opts.tol) {
      out.converged = true;
      return out;
    }
  }

  const double eps = opts.eps_floor;
  const Matrix dk = dykstra_ppt_density(rho.matrix(), cut).point.matrix();
  std::vector<Matrix> starts = {id / static_cast<double>(n), floored(dk, eps)};
  if (min_eigenvalue(dk) > 1e-9) starts.push_back(dk);
  if (warm && warm->rows() == n) {
    // The warm point counts as an upper bound as it stands; Frank-Wolfe
    // starts from its floored version.
    const double v = ree_certificate_upper(rho, *warm);
    if (std::isfinite(v)) accept_upper(*warm, v);
    starts.push_back(floored(*warm, eps));
  }
  Matrix sigma;
  double f = kInf;
  for (const Matrix& s : starts) {
    const double v = ree_value(rho, s);
    if (v < f) {
      f = v;
      sigma = s;
    }
  }
  if (f < out.upper) accept_upper(sigma, f);

  auto note_lower = [&](double low, const Matrix& point, const Matrix& z, double gap) {
    out.fw_gap = std::min(out.fw_gap, gap);
    if (low > out.lower) {
      out.lower = low;
      out.certificate = {point, z, {1.0}};
    }
  };

  LmoWarmStart ws;
  int it = 0;
  auto frank_wolfe = [&](int budget) {
    for (; it < budget && out.width() > opts.tol; ++it) {
      const Matrix w = -log_gradient(rho.matrix(), sigma);
      LmoResult lmo = lmo_ppt(w, cut, opts.lmo, &ws);
      const double gap = inner(w, sigma) - lmo.lower;
      const Matrix m = w - gamma(psd_project(lmo.dual_z), cut);
      note_lower(f - inner(w, sigma) + min_eigenvalue(m) - eig_slack(m), sigma, lmo.dual_z, gap);
      if (out.width() <= opts.tol) break;

      const Matrix atom = floored(lmo.minimizer, eps);
      auto seg = [&](double g) { return ree_value(rho, Matrix((1 - g) * sigma + g * atom)); };
      const auto [g_best, f_best] = boost::math::tools::brent_find_minima(seg, 0.0, 1.0, 40);
      if (!(f_best < f)) {
        it = budget;
        break;
      }
      sigma = (1 - g_best) * sigma + g_best * atom;
      f = f_best;
      accept_upper(sigma, f);
    }
  };

  auto polish = [&] {
    // One accurate oracle call at the best point often closes the gap (the
    // Dykstra start is already optimal for symmetric states).
    if (out.width() > opts.tol) {
      LmoOptions tight = opts.lmo;
      tight.obj_tol = 1e-10;
      tight.max_iter = 20000;
      const Matrix w = -log_gradient(rho.matrix(), sigma);
      LmoResult lmo = lmo_ppt(w, cut, tight, &ws);
      const Matrix m = w - gamma(psd_project(lmo.dual_z), cut);
      note_lower(f - inner(w, sigma) + min_eigenvalue(m) - eig_slack(m), sigma, lmo.dual_z, inner(w, sigma) - lmo.lower);
    }
    if (out.width() <= opts.tol || opts.max_newton <= 0) return;
    detail::BarrierObjective obj = ree_objective(rho);
    detail::BarrierOptions bo;
    bo.max_newton = opts.max_newton;
    bo.width_tol = opts.tol;
    bo.tau0 = 10.0 * n;
    const Matrix start = floored(out.upper_certificate, 1e-3);
    detail::BarrierResult br = detail::ppt_barrier_solve(obj, cut, start, bo, [&](const detail::BarrierResult& r) {
      Matrix s = r.sigma / r.sigma.trace().real();
      const double v = ree_value(rho, s);
      if (std::isfinite(v) && min_pt_eigenvalue(s, cut) >= 0 && min_eigenvalue(s) > 0) accept_upper(s, v);
      const double fr = ree_value(rho, r.sigma);
      const Matrix w = -log_gradient(rho.matrix(), r.sigma);
      const Matrix m = w - gamma(psd_project(r.z), cut);
      note_lower(fr - inner(w, r.sigma) + min_eigenvalue(m) - eig_slack(m), r.sigma, r.z, kInf);
      return out.width();
    });
    out.newton_steps += br.newton_steps;

    // Sharpen the multiplier at the polished point with the LMO.
    if (out.width() > opts.tol) {
      LmoOptions tight = opts.lmo;
      tight.obj_tol = 1e-8;
      tight.max_iter = 20000;
      const Matrix& s = br.sigma;
      const Matrix w = -log_gradient(rho.matrix(), s);
      LmoResult lmo = lmo_ppt(w, cut, tight);
      const Matrix m = w - gamma(psd_project(lmo.dual_z), cut);
      note_lower(ree_value(rho, s) - inner(w, s) + min_eigenvalue(m) - eig_slack(m), s, lmo.dual_z,
                 inner(w, s) - lmo.lower);
    }
  };

  // A short Frank-Wolfe warm-up and the barrier polish; the rest of the
  // Frank-Wolfe budget only runs when the interval is still open.
  frank_wolfe(std::min(opts.warmup_iter, opts.max_iter));
  polish();
  if (out.width() > opts.tol && it < opts.max_iter) {
    frank_wolfe(opts.max_iter);
    polish();
  }
  out.iterations = it;
  out.lower = std::max(out.lower, 0.0);
  out.converged = out.width() <= opts.tol;
  std::ostringstream os;
  os << "linearization at a PPT iterate with dual multiplier; FW gap " << out.fw_gap;
  if (out.lower_certificate.empty()) out.lower_certificate = os.str();
  return out;
}

BoundInterval regularized_ree_estimate(const DensityMatrix& rho, int n, const ReeOptions& opts) {
  std::vector<BoundInterval> seq = regularized_ree_sequence(rho, n, opts);
  return seq.back();
}

std::vector<BoundInterval> regularized_ree_sequence(const DensityMatrix& rho, int n_max, const ReeOptions& opts) {
  if (n_max < 1 || n_max > 3) throw std::invalid_argument("regularized_ree_estimate: copies must be 1, 2 or 3");
  double total = 1;
  for (int k = 0; k < n_max; ++k) total *= rho.dim();
  if (total > 81) throw std::invalid_argument("regularized_ree_estimate: dim^n exceeds 81");
  std::vector<BoundInterval> out;
  BoundInterval one = ree_ppt(rho, opts);
  out.push_back(one);
  DensityMatrix power = rho;
  Matrix witness = one.upper_certificate;
  for (int k = 2; k <= n_max; ++k) {
    power = power.tensor(rho);
    const Matrix warm = kron(witness, one.upper_certificate);
    BoundInterval b = ree_ppt(power, opts, &warm);
    witness = b.upper_certificate;
    out.push_back(b.scaled(1.0 / k));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Linearization {
  std::vector<double> a;
  std::vector<Matrix> w;
  bool ok = true;
};

Linearization measured_linearization(const std::vector<std::vector<double>>& p, const MeasurementFamily& family,
                                     const Matrix& sigma0) {
  Linearization lin;
  for (std::size_t j = 0; j < family.povms.size(); ++j) {
    const auto& effs = family.povms[j].effects;
    double kl = 0;
    Matrix w = Matrix::Zero(sigma0.rows(), sigma0.cols());
    for (std::size_t o = 0; o < effs.size(); ++o) {
      const double px = p[j][o];
      if (px <= 0) continue;
      const double q = inner(effs[o], sigma0);
      if (!(q > 0)) {
        lin.ok = false;
        return lin;
      }
      kl += px * std::log2(px / q);
      w -= (px / (q * kLn2)) * effs[o];
    }
    lin.a.push_back(kl - inner(w, sigma0));
    lin.w.push_back(std::move(w));
  }
  return lin;
}

std::vector<std::vector<double>> outcome_distributions(const DensityMatrix& rho, const MeasurementFamily& family) {
  std::vector<std::vector<double>> p;
  for (const Povm& m : family.povms) {
    std::vector<double> v = m.apply(rho.matrix());
    for (double& x : v) x = std::max(x, 0.0);
    p.push_back(std::move(v));
  }
  return p;
}

double measured_bound(const Linearization& lin, const std::vector<double>& lambda, const Matrix& z, const Bipartition& cut) {
  if (!lin.ok) return 0.0;
  RealVector l(static_cast<Eigen::Index>(lambda.size()));
  for (std::size_t j = 0; j < lambda.size(); ++j) l(static_cast<Eigen::Index>(j)) = lambda[j];
  l = simplex_project(l);
  double lin_part = 0;
  Matrix w = Matrix::Zero(lin.w[0].rows(), lin.w[0].cols());
  for (std::size_t j = 0; j < lin.a.size(); ++j) {
    const double lj = l(static_cast<Eigen::Index>(j));
    if (lj == 0) continue;
    lin_part += lj * lin.a[j];
    w += lj * lin.w[j];
  }
  const Matrix m = w - gamma(psd_project(z), cut);
  return lin_part + min_eigenvalue(m) - eig_slack(m);
}

void check_family(const DensityMatrix& rho, const MeasurementFamily& family) {
  if (family.povms.empty()) throw std::invalid_argument("measured_ree: empty family");
  if (family.cone_tag != "PPT") throw std::invalid_argument("measured_ree: family is not PPT-tagged");
  const Bipartition bp = rho.bipartition();
  if (family.cut.dims != bp.dims || family.cut.side_a != bp.side_a) {
    throw std::invalid_argument("measured_ree: family and state have different bipartitions");
  }
}

}  // namespace

double measured_certificate_lower(const DensityMatrix& rho, const MeasurementFamily& family,
                                  const LinearizationCertificate& cert) {
  check_family(rho, family);
  if (cert.empty()) return 0.0;
  const Linearization lin = measured_linearization(outcome_distributions(rho, family), family, cert.point);
  return std::max(0.0, measured_bound(lin, cert.lambda, cert.z, rho.bipartition()));
}

BoundInterval measured_ree(const DensityMatrix& rho, const MeasurementFamily& family, const MeasuredReeOptions& opts,
                           const BoundInterval* ree) {
  check_family(rho, family);
  const Bipartition cut = rho.bipartition();
  const int n = rho.dim();
  BoundInterval out;
  BoundInterval rb = ree ? *ree : ree_ppt(rho, opts.ree);
  out.upper = rb.upper;
  out.upper_certificate = rb.upper_certificate;
  out.upper_history = {rb.upper};
  out.lower = 0.0;
  out.lower_certificate = "measured lower bound over family '" + family.provenance + "'";
  if (out.width() <= opts.tol) {
    out.converged = true;
    return out;
  }

  const auto p = outcome_distributions(rho, family);
  detail::BarrierObjective obj;
  obj.kind = detail::BarrierObjective::Kind::kMeasured;
  for (std::size_t j = 0; j < family.povms.size(); ++j) {
    obj.effects.push_back(family.povms[j].effects);
    obj.p.push_back(p[j]);
  }
  detail::BarrierOptions bo;
  bo.max_newton = opts.max_newton;
  bo.width_tol = opts.tol;
  bo.tau0 = 10.0 * n;
  bo.mu = 30.0;
  const Matrix start = Matrix::Identity(n, n) / static_cast<double>(n);

  auto note = [&](const Matrix& point, const std::vector<double>& lambda, const Matrix& z) {
    const Linearization lin = measured_linearization(p, family, point);
    const double low = measured_bound(lin, lambda, z, cut);
    if (low > out.lower) {
      out.lower = low;
      out.certificate = {point, z, lambda};
    }
  };
  // The interval upper is the relative-entropy value, which generally lies
  // strictly above the measured one; convergence is judged on the gap of
  // the measured problem itself.
  double primal = kInf;
  detail::BarrierResult br = detail::ppt_barrier_solve(obj, cut, start, bo, [&](const detail::BarrierResult& r) {
    note(r.sigma, r.lambda, r.z);
    primal = std::min(primal, detail::barrier_objective_value(obj, r.sigma / r.sigma.trace().real()));
    return std::min(out.width(), primal - out.lower);
  });
  out.newton_steps = br.newton_steps;

  if (std::min(out.width(), primal - out.lower) > opts.tol && !br.lambda.empty()) {
    // Replace the barrier multiplier by the best one for the final weights.
    const Linearization lin = measured_linearization(p, family, br.sigma);
    if (lin.ok) {
      Matrix w = Matrix::Zero(n, n);
      for (std::size_t j = 0; j < lin.w.size(); ++j) w += br.lambda[j] * lin.w[j];
      LmoOptions tight = opts.ree.lmo;
      tight.obj_tol = 1e-9;
      tight.max_iter = 20000;
      LmoResult lmo = lmo_ppt(w, cut, tight);
      note(br.sigma, br.lambda, lmo.dual_z);
    }
  }
  out.lower = std::max(out.lower, 0.0);
  out.converged = std::min(out.width(), primal - out.lower) <= opts.tol;
  std::ostringstream os;
  os << "; measured primal value " << primal;
  out.lower_certificate += os.str();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

DensityMatrix four_party_marginal(const DensityMatrix& rho4, int first, int second) {
  if (rho4.dims().size() != 4) throw std::invalid_argument("check: expected four subsystems (A, A', B, B')");
  if (rho4.cut() != std::vector<int>{0, 1}) throw std::invalid_argument("check: expected the cut AA' | BB'");
  if (rho4.dim() > 81) throw std::invalid_argument("check: total dimension exceeds 81");
  return rho4.marginal({first, second}).with_cut({0});
}

void classify(InequalityRecord& r) {
  r.rhs_lower = 0;
  r.rhs_upper = 0;
  double widths = r.lhs.width();
  for (const BoundInterval& b : r.rhs_terms) {
    r.rhs_lower += b.lower;
    r.rhs_upper += b.upper;
    widths += b.width();
  }
  r.allowance = widths;
  r.slack = r.lhs.lower - r.rhs_upper;
  if (r.lhs.lower >= r.rhs_upper - r.tol) {
    r.status = CheckStatus::kCertified;
  } else if (r.lhs.upper + r.tol < r.rhs_lower) {
    r.status = CheckStatus::kViolated;
  } else {
    r.status = CheckStatus::kInconclusive;
  }
}

}  // namespace

InequalityRecord check_piani(const DensityMatrix& rho4, const MeasurementFamily& family_a2b2, const CheckOptions& opts) {
  const DensityMatrix ab = four_party_marginal(rho4, 0, 2);
  const DensityMatrix a2b2 = four_party_marginal(rho4, 1, 3);
  InequalityRecord r;
  r.name = "piani";
  r.tol = opts.tol;
  r.lhs = ree_ppt(rho4, opts.ree);
  r.rhs_terms.push_back(ree_ppt(ab, opts.ree));
  const BoundInterval r2 = ree_ppt(a2b2, opts.ree);
  r.rhs_terms.push_back(measured_ree(a2b2, family_a2b2, opts.measured, &r2));
  classify(r);
  // A violation needs the lower side to stay below the other even after
  // every interval is widened by the total width.
  if (r.status == CheckStatus::kViolated && r.lhs.lower + r.allowance + r.tol >= r.rhs_lower) {
    r.status = CheckStatus::kInconclusive;
  }
  std::ostringstream os;
  os << "D(AA':BB') in [" << r.lhs.lower << ", " << r.lhs.upper << "], D(A:B) in [" << r.rhs_terms[0].lower << ", "
     << r.rhs_terms[0].upper << "], D^PPT(A':B') in [" << r.rhs_terms[1].lower << ", " << r.rhs_terms[1].upper << "]";
  r.detail = os.str();
  return r;
}

InequalityRecord check_strong_superadditivity(const DensityMatrix& rho4, const MeasurementFamily& family_full,
                                              const MeasurementFamily& family_ab, const MeasurementFamily& family_a2b2,
                                              const CheckOptions& opts) {
  const DensityMatrix ab = four_party_marginal(rho4, 0, 2);
  const DensityMatrix a2b2 = four_party_marginal(rho4, 1, 3);
  InequalityRecord r;
  r.name = "strong-superadditivity";
  r.tol = opts.tol;
  r.lhs = measured_ree(rho4, family_full, opts.measured);
  r.rhs_terms.push_back(measured_ree(ab, family_ab, opts.measured));
  r.rhs_terms.push_back(measured_ree(a2b2, family_a2b2, opts.measured));
  classify(r);
  std::ostringstream os;
  os << "LHS [" << r.lhs.lower << ", " << r.lhs.upper << "], RHS sum [" << r.rhs_lower << ", " << r.rhs_upper << "]";
  r.detail = os.str();
  return r;
}

InequalityRecord check_asymptotic_continuity(const DensityMatrix& rho, const DensityMatrix& omega,
                                             const MeasurementFamily& family, const CheckOptions& opts) {
  if (rho.dims() != omega.dims() || rho.cut() != omega.cut()) throw std::invalid_argument("check_asymptotic_continuity: shape mismatch");
  const Bipartition bp = rho.bipartition();
  const int d = std::min(bp.dim_a(), bp.dim_b());
  const double eps = std::min(1.0, trace_distance(rho, omega));
  const double bound = eps * std::log2(static_cast<double>(d)) + g_fn(eps);
  InequalityRecord r;
  r.name = "asymptotic-continuity";
  r.tol = opts.tol;
  const BoundInterval a = measured_ree(rho, family, opts.measured);
  const BoundInterval b = measured_ree(omega, family, opts.measured);
  r.lhs.lower = r.lhs.upper = bound;
  r.rhs_terms = {a, b};
  const double diff = std::max(a.lower - b.upper, b.lower - a.upper);
  r.rhs_lower = diff;
  r.rhs_upper = std::max(a.upper - b.lower, b.upper - a.lower);
  r.slack = bound - diff;
  r.allowance = 0;
  r.status = diff <= bound + opts.tol ? CheckStatus::kCertified : CheckStatus::kViolated;
  std::ostringstream os;
  os << "eps " << eps << ", bound " << bound << ", certified difference " << diff;
  r.detail = os.str();
  return r;
}

InequalityRecord check_pinsker(const DensityMatrix& rho, const MeasurementFamily& family, const CheckOptions& opts) {
  InequalityRecord r;
  r.name = "pinsker";
  r.tol = opts.tol;
  const BoundInterval m = measured_ree(rho, family, opts.measured);
  std::vector<Matrix> candidates = {m.upper_certificate};
  if (!m.certificate.empty()) candidates.push_back(m.certificate.point);
  candidates.push_back(dykstra_ppt_density(rho.matrix(), rho.bipartition()).point.matrix());
  double best = kInf;
  for (const Matrix& s : candidates) best = std::min(best, family_norm(rho.matrix() - s, family));
  const double rhs = best * best / (2 * kLn2);
  r.lhs = m;
  BoundInterval rb;
  rb.lower = rb.upper = rhs;
  r.rhs_terms = {rb};
  r.rhs_lower = r.rhs_upper = rhs;
  r.slack = m.upper - rhs;
  r.status = m.upper >= rhs - opts.tol ? CheckStatus::kCertified : CheckStatus::kViolated;
  std::ostringstream os;
  os << "measured upper " << m.upper << " >= " << rhs << " (family norm " << best << ")";
  r.detail = os.str();
  return r;
}

}  // namespace resmono
