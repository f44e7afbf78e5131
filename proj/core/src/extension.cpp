#include "resmono/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "resmono/divergences.hpp"
#include "resmono/optimize.hpp"

namespace resmono {

double cond_mutual_info(const Matrix& rho_abe, const Dims& dims) {
  if (dims.size() != 3) throw std::invalid_argument("cond_mutual_info: expected factors (A, B, E)");
  return vn_entropy(partial_trace(rho_abe, dims, {0, 2})) + vn_entropy(partial_trace(rho_abe, dims, {1, 2})) -
         vn_entropy(rho_abe) - vn_entropy(partial_trace(rho_abe, dims, {2}));
}

double squashed_value(const Matrix& rho_abe, const Dims& dims) { return 0.5 * cond_mutual_info(rho_abe, dims); }

double cemi_value(const Matrix& rho, const Dims& dims) {
  if (dims.size() != 4) throw std::invalid_argument("cemi_value: expected factors (A, A', B, B')");
  const double s_all = vn_entropy(rho);
  const double i_big = vn_entropy(partial_trace(rho, dims, {0, 1})) + vn_entropy(partial_trace(rho, dims, {2, 3})) - s_all;
  const Dims d2 = {dims[1], dims[3]};
  const Matrix r2 = partial_trace(rho, dims, {1, 3});
  const double i_small = vn_entropy(partial_trace(r2, d2, {0})) + vn_entropy(partial_trace(r2, d2, {1})) - vn_entropy(r2);
  return 0.5 * (i_big - i_small);
}

namespace {

enum class Kind { kSquashed, kCemi };

// Both objectives are nonnegative; below this the search stops.
constexpr double kFloor = 1e-10;

struct Problem {
  Kind kind;
  int da, db, r, x, f;
  Matrix factor;  // (da db) x r
};

Matrix isometry(const RealVector& p, int rows, int cols) {
  Matrix y(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) y(i, j) = Complex(p(2 * (i * cols + j)), p(2 * (i * cols + j) + 1));
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

// Global pure state on (A, B, X, F) from the purification and the isometry
// R -> X (x) F, row-major over the factors.
Vector global_state(const Problem& pb, const Matrix& v) {
  const Matrix n = pb.factor * v.transpose();  // (da db) x (x f)
  Vector psi(n.size());
  for (Eigen::Index i = 0; i < n.rows(); ++i)
    for (Eigen::Index j = 0; j < n.cols(); ++j) psi(i * n.cols() + j) = n(i, j);
  return psi;
}

Matrix traced_state(const Vector& psi, int keep_dim) {
  const Eigen::Index rest = psi.size() / keep_dim;
  Matrix m(keep_dim, rest);
  for (int i = 0; i < keep_dim; ++i) m.row(i) = psi.segment(i * rest, rest).transpose();
  return m * m.adjoint();
}

// Entropy of the factors `keep` of a pure state; uses the smaller side.
double pure_marginal_entropy(const Vector& psi, const Dims& dims, std::vector<int> keep) {
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) rest.push_back(i);
  int dk = 1, dr = 1;
  for (int i : keep) dk *= dims[i];
  for (int i : rest) dr *= dims[i];
  if (dr < dk) {
    std::swap(keep, rest);
    std::swap(dk, dr);
  }
  std::vector<int> order = keep;
  order.insert(order.end(), rest.begin(), rest.end());
  return vn_entropy(traced_state(permute_subsystems(psi, dims, order), dk));
}

double fast_objective(const Problem& pb, const Vector& psi, const Dims& ext) {
  if (pb.kind == Kind::kSquashed) {
    const Dims d = {pb.da, pb.db, ext[0], pb.f};
    return 0.5 * (pure_marginal_entropy(psi, d, {0, 2}) + pure_marginal_entropy(psi, d, {1, 2}) -
                  pure_marginal_entropy(psi, d, {3}) - pure_marginal_entropy(psi, d, {2}));
  }
  const Dims d = {pb.da, pb.db, ext[0], ext[1], pb.f};
  const double i_big = pure_marginal_entropy(psi, d, {0, 2}) + pure_marginal_entropy(psi, d, {1, 3}) -
                       pure_marginal_entropy(psi, d, {4});
  const double i_small =
      pure_marginal_entropy(psi, d, {2}) + pure_marginal_entropy(psi, d, {3}) - pure_marginal_entropy(psi, d, {2, 3});
  return 0.5 * (i_big - i_small);
}

// Extension with factors in output order: (A, B, E) or (A, A', B, B').
Matrix extension_from(const Problem& pb, const Vector& psi, const Dims& ext) {
  Dims d = {pb.da, pb.db};
  d.insert(d.end(), ext.begin(), ext.end());
  d.push_back(pb.f);
  std::vector<int> order = pb.kind == Kind::kSquashed ? std::vector<int>{0, 1, 2, 3} : std::vector<int>{0, 2, 1, 3, 4};
  return traced_state(permute_subsystems(psi, d, order), pb.da * pb.db * pb.x);
}

Dims output_dims(const Problem& pb, const Dims& ext) {
  if (pb.kind == Kind::kSquashed) return {pb.da, pb.db, ext[0]};
  return {pb.da, ext[0], pb.db, ext[1]};
}

ExtensionBound optimize_extension(const DensityMatrix& rho_ab, const ExtensionOptions& opts, Kind kind) {
  if (rho_ab.dims().size() != 2) throw std::invalid_argument("extension bound: expected a two-factor state");
  const Dims& ext = opts.ext_dims;
  if (kind == Kind::kSquashed && ext.size() != 1) throw std::invalid_argument("squashed_upper: ext_dims must be {E}");
  if (kind == Kind::kCemi && ext.size() != 2) throw std::invalid_argument("cemi_upper: ext_dims must be {A', B'}");
  for (int e : ext)
    if (e < 1) throw std::invalid_argument("extension bound: extension dimension below 1");

  Problem pb{kind, rho_ab.dims()[0], rho_ab.dims()[1], 0, total_dim(ext), 0, {}};
  const HermEig eig = herm_eig(rho_ab.matrix());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > 1e-13) keep.push_back(i);
  pb.r = static_cast<int>(keep.size());
  pb.factor.resize(rho_ab.dim(), pb.r);
  for (int k = 0; k < pb.r; ++k) pb.factor.col(k) = std::sqrt(eig.values(keep[k])) * eig.vectors.col(keep[k]);
  pb.f = opts.kraus > 0 ? opts.kraus : *std::max_element(ext.begin(), ext.end());
  const int rows = pb.x * pb.f;
  if (rows < pb.r) pb.f = (pb.r + pb.x - 1) / pb.x;
  const int nrows = pb.x * pb.f;

  auto f = [&](const RealVector& p) { return fast_objective(pb, global_state(pb, isometry(p, nrows, pb.r)), ext); };

  ExtensionBound best;
  best.value = std::numeric_limits<double>::infinity();
  Rng rng(opts.seed);
  RealVector best_p;
  for (int k = 0; k < std::max(1, opts.restarts); ++k) {
    RealVector p0(2 * nrows * pb.r);
    if (k == 0) {
      // Trivial extension: R embedded in F with X fixed to |0>.
      p0.setZero();
      for (int j = 0; j < pb.r; ++j) p0(2 * (j * pb.r + j)) = 1.0;
    } else {
      for (Eigen::Index i = 0; i < p0.size(); ++i) p0(i) = rng.normal();
    }
    PatternSearchOptions po{0.5, 1e-7, 0.5, opts.max_evals};
    po.target = kFloor;
    const PatternSearchResult res = pattern_search(f, p0, po);
    best.evals += res.evals;
    if (res.value < best.value) {
      best.value = res.value;
      best_p = res.x;
    }
    if (best.value <= kFloor) break;
  }

  best.extension = extension_from(pb, global_state(pb, isometry(best_p, nrows, pb.r)), ext);
  best.dims = output_dims(pb, ext);
  const std::vector<int> ab_keep = kind == Kind::kSquashed ? std::vector<int>{0, 1} : std::vector<int>{0, 2};
  best.marginal_residual = (partial_trace(best.extension, best.dims, ab_keep) - rho_ab.matrix()).cwiseAbs().maxCoeff();
  best.value = kind == Kind::kSquashed ? squashed_value(best.extension, best.dims) : cemi_value(best.extension, best.dims);
  best.ansatz = std::string(kind == Kind::kSquashed ? "squashed" : "cemi") + "/stinespring/ext=";
  for (std::size_t i = 0; i < ext.size(); ++i) best.ansatz += (i ? "x" : "") + std::to_string(ext[i]);
  best.ansatz += "/kraus=" + std::to_string(pb.f) + "/restarts=" + std::to_string(opts.restarts) +
                 "/seed=" + std::to_string(opts.seed);
  return best;
}

}  // namespace

ExtensionBound squashed_upper(const DensityMatrix& rho_ab, const ExtensionOptions& opts) {
  return optimize_extension(rho_ab, opts, Kind::kSquashed);
}

ExtensionBound cemi_upper(const DensityMatrix& rho_ab, const ExtensionOptions& opts) {
  return optimize_extension(rho_ab, opts, Kind::kCemi);
}

SandwichRecord check_sandwich(const DensityMatrix& rho_ab, const ExtensionOptions& squashed_opts,
                              const ExtensionOptions& cemi_opts, double tol) {
  SandwichRecord r;
  r.squashed = squashed_upper(rho_ab, squashed_opts);
  r.cemi = cemi_upper(rho_ab, cemi_opts);
  r.slack = r.cemi.value - r.squashed.value;
  r.consistent = r.slack >= -tol;
  return r;
}

}  // namespace resmono
