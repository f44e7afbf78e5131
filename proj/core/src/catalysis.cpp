#include "resmono/catalysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resmono {

namespace {

Dims concat(Dims a, const Dims& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<int> shifted(const std::vector<int>& v, int by) {
  std::vector<int> out(v);
  for (int& x : out) x += by;
  return out;
}

// Lambda(w) for a Choi matrix on in (x) out given as raw dimensions.
Matrix apply_raw(const Matrix& j, const Matrix& w, int din, int dout) {
  Matrix out = Matrix::Zero(dout, dout);
  for (int i = 0; i < din; ++i)
    for (int ip = 0; ip < din; ++ip) {
      const Complex c = w(ip, i);
      if (c == Complex(0)) continue;
      out += c * j.block(ip * dout, i * dout, dout, dout);
    }
  return out;
}

Matrix psd_normalized(const Matrix& m) {
  const HermEig e = herm_eig(hermitian_part(m));
  const RealVector v = e.values.cwiseMax(0.0);
  Matrix r = e.vectors * v.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  return r / r.trace().real();
}

struct Setup {
  Matrix w;  // input state
  Dims in_dims, cat_dims;
  std::vector<int> in_b, cat_b;
  int k = 1;
  bool has_catalyst = false;
  Matrix tau;
};

void check_guard(const Setup& st) {
  const int big_d = 1 << st.k;
  if (static_cast<long>(total_dim(st.in_dims)) * big_d * big_d > 4096)
    throw std::invalid_argument("fidelity: dimension guard dim(in) 4^k <= 4096");
}

SdpProblem build_problem(const Setup& st, CatalystMode mode) {
  check_guard(st);
  const int din = total_dim(st.in_dims), dcat = total_dim(st.cat_dims);
  const int big_d = 1 << st.k;
  const int n = din * dcat;
  const Matrix wt = st.w.transpose();
  const Dims rdims = concat(st.in_dims, st.cat_dims);
  const SdpTransform gamma{rdims, concat(st.in_b, shifted(st.cat_b, static_cast<int>(st.in_dims.size())))};

  SdpProblem p;
  const int j1 = p.add_block(n, "J1"), j0 = p.add_block(n, "J0");
  p.add_psd(j1);
  p.add_psd(j0);
  p.add_cone_row({"sym", {{j1, 1.0}, {j0, 1.0 / (big_d + 1)}}, gamma});
  p.add_cone_row({"anti", {{j1, -1.0}, {j0, 1.0 / (big_d - 1)}}, gamma});
  const Matrix icat = Matrix::Identity(dcat, dcat);
  auto tp = [icat](const Matrix& e) { return kron(e, icat); };
  p.add_equality({{j1, tp}, {j0, tp}}, Matrix::Identity(din, din), "trace-preserving");
  if (st.has_catalyst) {
    if (mode == CatalystMode::kCorrelated) {
      auto ret = [wt](const Matrix& e) { return kron(wt, e); };
      p.add_equality({{j1, ret}, {j0, ret}}, st.tau, "catalyst-return", true);
    } else {
      const Matrix tau = st.tau;
      auto prod = [wt, tau, icat](const Matrix& e) { return kron(wt, Matrix(e - inner(tau, e) * icat)); };
      p.add_equality({{j1, prod}}, Matrix::Zero(dcat, dcat), "product-success", true);
      p.add_equality({{j0, prod}}, Matrix::Zero(dcat, dcat), "product-failure", true);
    }
  }
  p.add_objective(j1, kron(wt, icat));
  p.add_trace_bound({j1, j0}, din);
  return p;
}

FidelityResult solve(const Setup& st, CatalystMode mode, const FidelityOptions& opts) {
  const SdpProblem p = build_problem(st, mode);
  const int din = total_dim(st.in_dims), dcat = total_dim(st.cat_dims);
  const int big_d = 1 << st.k;
  const Dims rdims = concat(st.in_dims, st.cat_dims);
  const Matrix icat = Matrix::Identity(dcat, dcat);

  const SdpSolution s = admm_sdp(p, opts.sdp);
  FidelityResult r;
  r.value = s.primal_objective;
  r.upper = s.upper;
  r.primal_residual = s.primal_residual;
  r.affine_residual = s.affine_residual;
  r.iterations = s.iterations;
  r.converged = s.converged;
  r.status = s.status;
  r.dual_y = s.y;
  r.dual_cones = s.dual_cones;

  const Matrix x1 = apply_raw(s.x[0], st.w, din, dcat);
  if (x1.trace().real() > 1e-12) r.success_catalyst = psd_normalized(x1);

  // Full Choi matrix on (in, A', B', catalyst).
  const Matrix phi = max_entangled(big_d).matrix();
  const Matrix rest = (Matrix::Identity(big_d * big_d, big_d * big_d) - phi) / double(big_d * big_d - 1);
  const Dims stacked = concat({big_d, big_d}, rdims);
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(st.in_dims.size()); ++i) order.push_back(i + 2);
  order.push_back(0);
  order.push_back(1);
  for (int i = 0; i < static_cast<int>(st.cat_dims.size()); ++i) order.push_back(static_cast<int>(st.in_dims.size()) + 2 + i);
  r.choi.j = permute_subsystems(Matrix(kron(phi, s.x[0]) + kron(rest, s.x[1])), stacked, order);
  r.choi.in_dims = st.in_dims;
  r.choi.in_b = st.in_b;
  r.choi.out_dims = concat({big_d, big_d}, st.cat_dims);
  r.choi.out_b = concat({1}, shifted(st.cat_b, 2));
  if (opts.verify_full_choi) r.check = verify_choi(r.choi);
  r.output = choi_apply(r.choi, st.w);
  r.choi_fidelity = (kron(phi, icat) * r.output).trace().real();
  return r;
}

}  // namespace

Matrix choi_apply(const ChoiMatrix& choi, const Matrix& rho) {
  if (rho.rows() != choi.in_dim()) throw std::invalid_argument("choi_apply: input dimension mismatch");
  return apply_raw(choi.j, rho, choi.in_dim(), choi.out_dim());
}

ChoiMatrix identity_choi(const Dims& dims, const std::vector<int>& b_side) {
  const int d = total_dim(dims);
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1;
  return {v * v.adjoint(), dims, dims, b_side, b_side};
}

ChoiMatrix depolarizing_choi(const Dims& in_dims, const Dims& out_dims) {
  const int din = total_dim(in_dims), dout = total_dim(out_dims);
  return {Matrix::Identity(din * dout, din * dout) / double(dout), in_dims, out_dims, {}, {}};
}

ChoiCheck verify_choi(const ChoiMatrix& choi) {
  const Dims all = concat(choi.in_dims, choi.out_dims);
  std::vector<int> in_factors(choi.in_dims.size());
  for (std::size_t i = 0; i < in_factors.size(); ++i) in_factors[i] = static_cast<int>(i);
  ChoiCheck c;
  c.min_eig = min_eigenvalue(choi.j);
  c.tp_residual = (partial_trace(choi.j, all, in_factors) - Matrix::Identity(choi.in_dim(), choi.in_dim())).cwiseAbs().maxCoeff();
  const std::vector<int> b = concat(choi.in_b, shifted(choi.out_b, static_cast<int>(choi.in_dims.size())));
  c.min_eig_pt = b.empty() ? c.min_eig : min_eigenvalue(partial_transpose(choi.j, all, b));
  return c;
}

namespace {

Setup plain_setup(const DensityMatrix& rho, int k) {
  if (!rho.has_cut()) throw std::invalid_argument("ppt_ops_fidelity: state has no cut");
  if (k < 1) throw std::invalid_argument("ppt_ops_fidelity: k must be positive");
  Setup st;
  st.w = rho.matrix();
  st.in_dims = rho.dims();
  st.in_b = rho.bipartition().side_b();
  st.k = k;
  return st;
}

Setup catalytic_setup(const DensityMatrix& rho, const DensityMatrix& tau, int k) {
  if (tau.dim() == 1) return plain_setup(rho, k);
  if (!rho.has_cut() || !tau.has_cut()) throw std::invalid_argument("catalytic_fidelity: state or catalyst has no cut");
  if (k < 1) throw std::invalid_argument("catalytic_fidelity: k must be positive");
  Setup st;
  st.w = kron(rho.matrix(), tau.matrix());
  st.in_dims = concat(rho.dims(), tau.dims());
  st.in_b = concat(rho.bipartition().side_b(), shifted(tau.bipartition().side_b(), static_cast<int>(rho.dims().size())));
  st.cat_dims = tau.dims();
  st.cat_b = tau.bipartition().side_b();
  st.k = k;
  st.has_catalyst = true;
  st.tau = tau.matrix();
  return st;
}

}  // namespace

FidelityResult ppt_ops_fidelity(const DensityMatrix& rho, int k, const FidelityOptions& opts) {
  return solve(plain_setup(rho, k), CatalystMode::kCorrelated, opts);
}

FidelityResult catalytic_fidelity(const DensityMatrix& rho, const DensityMatrix& tau, int k, CatalystMode mode,
                                  const FidelityOptions& opts) {
  return solve(catalytic_setup(rho, tau, k), mode, opts);
}

double recheck_upper_bound(const DensityMatrix& rho, const DensityMatrix& tau, int k, CatalystMode mode,
                           const FidelityResult& result) {
  return certified_upper_bound(build_problem(catalytic_setup(rho, tau, k), mode), result.dual_y, result.dual_cones);
}

std::vector<std::pair<std::string, DensityMatrix>> default_catalysts(std::uint64_t seed, int n_random, int cat_dim) {
  if (cat_dim < 2) throw std::invalid_argument("default_catalysts: cat_dim must be at least 2");
  const int d = cat_dim;
  std::vector<std::pair<std::string, DensityMatrix>> out;
  out.emplace_back("trivial", DensityMatrix(Matrix::Ones(1, 1), {1, 1}, {0}));
  out.emplace_back("maximally-mixed", maximally_mixed({d, d}, {0}));
  Matrix zero = Matrix::Zero(d * d, d * d);
  zero(0, 0) = 1;
  out.emplace_back("product-00", DensityMatrix(zero, {d, d}, {0}));
  if (d == 2) {
    // Bell basis: (|00> +- |11>)/sqrt2, (|01> +- |10>)/sqrt2.
    std::vector<Vector> bell(4, Vector::Zero(4));
    const double s = 1 / std::sqrt(2.0);
    bell[0](0) = s, bell[0](3) = s;
    bell[1](0) = s, bell[1](3) = -s;
    bell[2](1) = s, bell[2](2) = s;
    bell[3](1) = s, bell[3](2) = -s;
    for (const auto& [name, w] : std::vector<std::pair<std::string, std::vector<double>>>{
             {"bell-diagonal-half", {0.5, 0.5, 0.0, 0.0}}, {"bell-diagonal-4321", {0.4, 0.3, 0.2, 0.1}}}) {
      Matrix m = Matrix::Zero(4, 4);
      for (int i = 0; i < 4; ++i) m += w[i] * bell[i] * bell[i].adjoint();
      out.emplace_back(name, DensityMatrix(m, {2, 2}, {0}));
    }
  } else {
    // Isotropic states are PPT up to singlet fraction 1/d.
    out.emplace_back("isotropic-edge", isotropic(d, 1.0 / d));
    out.emplace_back("isotropic-half", isotropic(d, 0.5 / d));
  }
  Rng rng(seed);
  for (int i = 0; i < n_random; ++i) {
    Rng child = rng.child(static_cast<std::uint64_t>(i));
    out.emplace_back("random-separable-" + std::to_string(i), random_separable(d, d, child, 4));
  }
  return out;
}

std::vector<SweepEntry> catalyst_sweep(const DensityMatrix& rho, const std::vector<std::pair<std::string, DensityMatrix>>& catalysts,
                                       int k, CatalystMode mode, const FidelityOptions& opts) {
  std::vector<SweepEntry> out;
  out.reserve(catalysts.size());
  for (const auto& [name, tau] : catalysts) out.push_back({name, tau, catalytic_fidelity(rho, tau, k, mode, opts)});
  return out;
}

CatalystSearchResult catalyst_search(const DensityMatrix& rho, int k, int dim_cap, int rounds, std::uint64_t seed,
                                     const FidelityOptions& opts) {
  if (dim_cap < 1 || rounds < 1) throw std::invalid_argument("catalyst_search: dim_cap and rounds must be positive");
  Rng rng(seed);
  DensityMatrix tau = dim_cap == 1 ? DensityMatrix(Matrix::Ones(1, 1), {1, 1}, {0}) : random_separable(dim_cap, dim_cap, rng, 4);
  CatalystSearchResult out{tau, {}, {}};
  for (int r = 0; r < rounds; ++r) {
    FidelityResult f = catalytic_fidelity(rho, tau, k, CatalystMode::kCorrelated, opts);
    out.history.push_back(f.value);
    const bool better = r == 0 || f.value > out.best.value;
    const Matrix next = f.success_catalyst;
    if (better) {
      out.best = std::move(f);
      out.best_catalyst = tau;
    }
    if (tau.dim() == 1 || next.size() == 0) break;
    tau = DensityMatrix(next, tau.dims(), tau.cut());
  }
  return out;
}

}  // namespace resmono
