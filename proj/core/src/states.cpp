#include "resmono/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace resmono {

std::vector<int> Bipartition::side_b() const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (std::find(side_a.begin(), side_a.end(), k) == side_a.end()) out.push_back(k);
  }
  return out;
}

int Bipartition::dim_a() const {
  int p = 1;
  for (int k : side_a) p *= dims[k];
  return p;
}

int Bipartition::dim_b() const {
  int p = 1;
  for (int k : side_b()) p *= dims[k];
  return p;
}

std::vector<int> Bipartition::a_first_order() const {
  std::vector<int> order(side_a);
  std::sort(order.begin(), order.end());
  for (int k : side_b()) order.push_back(k);
  return order;
}

DensityMatrix::DensityMatrix(Matrix m, Dims dims, std::vector<int> cut)
    : m_(std::move(m)), dims_(std::move(dims)), cut_(std::move(cut)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("DensityMatrix: matrix is not square");
  if (dims_.empty()) throw std::invalid_argument("DensityMatrix: empty dims");
  for (int d : dims_)
    if (d < 1) throw std::invalid_argument("DensityMatrix: non-positive dimension");
  if (total_dim(dims_) != m_.rows()) throw std::invalid_argument("DensityMatrix: dims do not match matrix size");
  std::sort(cut_.begin(), cut_.end());
  for (std::size_t i = 0; i < cut_.size(); ++i) {
    if (cut_[i] < 0 || cut_[i] >= static_cast<int>(dims_.size()) || (i > 0 && cut_[i] == cut_[i - 1])) {
      throw std::invalid_argument("DensityMatrix: bad cut index");
    }
  }
  if (!cut_.empty() && cut_.size() == dims_.size()) throw std::invalid_argument("DensityMatrix: cut leaves B side empty");
  m_ = hermitian_part(m_);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  const double lmin = min_eigenvalue(m_);
  if (lmin < -1e-10) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(lmin));
  }
}

DensityMatrix::DensityMatrix(Matrix m) : DensityMatrix(m, Dims{static_cast<int>(m.rows())}) {}

Bipartition DensityMatrix::bipartition() const {
  if (cut_.empty()) throw std::invalid_argument("state has no bipartition cut");
  return {dims_, cut_};
}

DensityMatrix DensityMatrix::marginal(const std::vector<int>& keep) const {
  std::vector<int> sorted(keep);
  std::sort(sorted.begin(), sorted.end());
  Matrix r = partial_trace(m_, dims_, sorted);
  Dims nd;
  std::vector<int> ncut;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    nd.push_back(dims_[sorted[i]]);
    if (std::find(cut_.begin(), cut_.end(), sorted[i]) != cut_.end()) ncut.push_back(static_cast<int>(i));
  }
  if (ncut.size() == nd.size()) ncut.clear();
  return DensityMatrix(r, nd, ncut);
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  Dims nd(dims_);
  nd.insert(nd.end(), other.dims_.begin(), other.dims_.end());
  std::vector<int> ncut(cut_);
  for (int k : other.cut_) ncut.push_back(k + static_cast<int>(dims_.size()));
  if (ncut.size() == nd.size()) ncut.clear();
  return DensityMatrix(kron(m_, other.m_), nd, ncut);
}

DensityMatrix DensityMatrix::with_cut(std::vector<int> cut) const { return DensityMatrix(m_, dims_, std::move(cut)); }

DensityMatrix DensityMatrix::as_two_party() const {
  const Bipartition bp = bipartition();
  Matrix p = permute_subsystems(m_, dims_, bp.a_first_order());
  return DensityMatrix(p, Dims{bp.dim_a(), bp.dim_b()}, {0});
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

DensityMatrix pure_state(const Vector& psi, Dims dims, std::vector<int> cut) {
  const double n = psi.norm();
  if (!(n > 0)) throw std::invalid_argument("pure_state: zero vector");
  Vector v = psi / n;
  return DensityMatrix(v * v.adjoint(), std::move(dims), std::move(cut));
}

DensityMatrix max_entangled(int d) {
  if (d < 2) throw std::invalid_argument("max_entangled: d must be at least 2");
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return pure_state(v, {d, d}, {0});
}

DensityMatrix plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return pure_state(v, {2});
}

DensityMatrix maximally_mixed(const Dims& dims, std::vector<int> cut) {
  const int n = total_dim(dims);
  return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(n), dims, std::move(cut));
}

DensityMatrix isotropic(int d, double p) {
  if (d < 2) throw std::invalid_argument("isotropic: d must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("isotropic: p outside [0, 1]");
  const Matrix phi = max_entangled(d).matrix();
  const Matrix id = Matrix::Identity(d * d, d * d);
  Matrix m = p * phi + (1.0 - p) * (id - phi) / static_cast<double>(d * d - 1);
  return DensityMatrix(m, {d, d}, {0});
}

Matrix swap_operator(int d) {
  Matrix f = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

DensityMatrix werner(int d, double p) {
  if (d < 2) throw std::invalid_argument("werner: d must be at least 2");
  if (!(p >= -1.0 && p <= 1.0)) throw std::invalid_argument("werner: p outside [-1, 1]");
  const double den = static_cast<double>(d) * (d * d - 1);
  const double a = (d - p) / den;
  const double b = (d * p - 1.0) / den;
  Matrix m = a * Matrix::Identity(d * d, d * d) + b * swap_operator(d);
  return DensityMatrix(m, {d, d}, {0});
}

DensityMatrix tiles_upb() {
  const double s = 1.0 / std::sqrt(2.0);
  auto ket = [](int i) {
    Vector v = Vector::Zero(3);
    v(i) = 1.0;
    return v;
  };
  std::vector<Vector> vs;
  vs.push_back(kron(ket(0), Vector((ket(0) - ket(1)) * s)));
  vs.push_back(kron(Vector((ket(0) - ket(1)) * s), ket(2)));
  vs.push_back(kron(ket(2), Vector((ket(1) - ket(2)) * s)));
  vs.push_back(kron(Vector((ket(1) - ket(2)) * s), ket(0)));
  Vector all = (ket(0) + ket(1) + ket(2)) / std::sqrt(3.0);
  vs.push_back(kron(all, all));
  Matrix m = Matrix::Identity(9, 9);
  for (const Vector& v : vs) m -= v * v.adjoint();
  return DensityMatrix(m / 4.0, {3, 3}, {0});
}

DensityMatrix random_density(const Dims& dims, Rng& rng, int rank, std::vector<int> cut) {
  const int n = total_dim(dims);
  const int k = rank <= 0 ? n : rank;
  Matrix g = rng.ginibre(n, k);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(m, dims, std::move(cut));
}

DensityMatrix random_density(int d, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(Dims{d}, rng);
}

DensityMatrix random_pure(const Dims& dims, Rng& rng, std::vector<int> cut) {
  return pure_state(rng.haar_vector(total_dim(dims)), dims, std::move(cut));
}

DensityMatrix random_pure(int d, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(Dims{d}, rng);
}

Matrix random_local_unitary(const Dims& dims, Rng& rng) {
  Matrix u = Matrix::Identity(1, 1);
  for (int d : dims) u = kron(u, rng.haar_unitary(d));
  return u;
}

Matrix random_local_unitary(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_local_unitary(dims, rng);
}

DensityMatrix random_separable(int da, int db, Rng& rng, int terms) {
  if (terms < 1) throw std::invalid_argument("random_separable: need at least one term");
  Matrix m = Matrix::Zero(da * db, da * db);
  double total = 0;
  for (int t = 0; t < terms; ++t) {
    const double w = rng.uniform() + 1e-3;
    Vector a = rng.haar_vector(da), b = rng.haar_vector(db);
    Vector ab = kron(a, b);
    m += w * ab * ab.adjoint();
    total += w;
  }
  return DensityMatrix(m / total, {da, db}, {0});
}

double realignment_norm(const Matrix& rho, int da, int db) {
  if (rho.rows() != da * db || rho.cols() != da * db) throw std::invalid_argument("realignment_norm: size mismatch");
  Matrix r(da * da, db * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) r(i * da + j, k * db + l) = rho(i * db + k, j * db + l);
  Eigen::JacobiSVD<Matrix> svd(r);
  return svd.singularValues().sum();
}

Matrix random_hermitian(int d, Rng& rng) {
  Matrix g = rng.ginibre(d, d);
  return hermitian_part(g);
}

}  // namespace resmono
