#include "resmono/measurement.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace resmono {

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
  double s = 0;
  for (double& x : p_) {
    if (!(x >= -1e-12)) throw std::invalid_argument("ProbVector: negative entry");
    if (x < 0) x = 0;
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("ProbVector: entries do not sum to 1");
}

ProbVector ProbVector::normalized(std::vector<double> p, double tol) {
  double s = 0;
  for (double& x : p) {
    if (!(x >= -tol)) throw std::invalid_argument("ProbVector: negative entry");
    if (x < 0) x = 0;
    s += x;
  }
  if (std::abs(s - 1.0) > tol) throw std::invalid_argument("ProbVector: entries do not sum to 1");
  for (double& x : p) x /= s;
  return ProbVector(std::move(p));
}

std::vector<double> Povm::apply(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(effects.size());
  for (const Matrix& e : effects) out.push_back(inner(e, x));
  return out;
}

ProbVector Povm::probabilities(const Matrix& rho) const { return ProbVector::normalized(apply(rho)); }

void MeasurementFamily::validate() const {
  const int n = total_dim(cut.dims);
  const std::vector<int> b = cut.side_b();
  for (const Povm& m : povms) {
    Matrix sum = Matrix::Zero(n, n);
    for (const Matrix& e : m.effects) {
      if (e.rows() != n || e.cols() != n) throw std::invalid_argument("povm '" + m.name + "': effect has wrong size");
      if (min_eigenvalue(e) < -1e-10) throw std::invalid_argument("povm '" + m.name + "': effect is not PSD");
      if (min_eigenvalue(partial_transpose(e, cut.dims, b)) < -1e-10) {
        throw std::invalid_argument("povm '" + m.name + "': effect is not PPT");
      }
      sum += e;
    }
    if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("povm '" + m.name + "': effects do not sum to identity");
    }
  }
}

Povm detection_measurement(int d) {
  if (d < 2) throw std::invalid_argument("detection_measurement: d must be at least 2");
  Matrix e = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) e(i * d + i, i * d + i) = 1.0;
  return {"detection", {e, Matrix::Identity(d * d, d * d) - e}};
}

namespace {

// Moves an operator written in (A-side, B-side) factor order back to the
// original factor order of `cut`.
Matrix from_a_first(const Matrix& m, const Bipartition& cut) {
  const std::vector<int> order = cut.a_first_order();
  Dims af(order.size());
  std::vector<int> inv(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    af[k] = cut.dims[order[k]];
    inv[order[k]] = static_cast<int>(k);
  }
  return permute_subsystems(m, af, inv);
}

Matrix pauli(char c) {
  Matrix p(2, 2);
  const Complex i(0, 1);
  switch (c) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, -i, i, 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: throw std::logic_error("pauli: bad label");
  }
  return p;
}

bool is_prime(int d) {
  if (d < 2) return false;
  for (int k = 2; k * k <= d; ++k)
    if (d % k == 0) return false;
  return true;
}

}  // namespace

bool has_mub_construction(int d) { return d == 4 || is_prime(d); }

std::vector<Matrix> mutually_unbiased_bases(int d) {
  std::vector<Matrix> out;
  if (d == 2) {
    for (char c : {'Z', 'X', 'Y'}) out.push_back(herm_eig(pauli(c)).vectors);
    return out;
  }
  if (d == 4) {
    // Common eigenbases of five maximal commuting classes of two-qubit Paulis.
    const char* classes[5][3] = {{"ZI", "IZ", "ZZ"}, {"XI", "IX", "XX"}, {"YI", "IY", "YY"},
                                 {"XY", "YZ", "ZX"}, {"YX", "ZY", "XZ"}};
    for (const auto& cls : classes) {
      Matrix h = Matrix::Zero(4, 4);
      double w = 1.0;
      for (const char* s : cls) {
        h += w * kron(pauli(s[0]), pauli(s[1]));
        w *= 2.0;
      }
      out.push_back(herm_eig(h).vectors);
    }
    return out;
  }
  if (!is_prime(d)) throw std::invalid_argument("mutually_unbiased_bases: no construction for this dimension");
  out.push_back(Matrix::Identity(d, d));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) {
    Matrix b(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        const int e = (k * i * i + j * i) % d;
        b(i, j) = std::polar(s, 2.0 * std::numbers::pi * e / d);
      }
    out.push_back(b);
  }
  return out;
}

std::vector<Povm> mub_detection(int d) {
  std::vector<Povm> out;
  const std::vector<Matrix> bases = mutually_unbiased_bases(d);
  for (std::size_t k = 0; k < bases.size(); ++k) {
    Matrix e = Matrix::Zero(d * d, d * d);
    for (int j = 0; j < d; ++j) {
      Vector v = bases[k].col(j);
      Vector vv = kron(v, Vector(v.conjugate()));
      e += vv * vv.adjoint();
    }
    e = hermitian_part(e);
    out.push_back({"mub-detection-" + std::to_string(k), {e, Matrix::Identity(d * d, d * d) - e}});
  }
  return out;
}

Povm computational_measurement(const Bipartition& cut) {
  const int n = total_dim(cut.dims);
  Povm p{"computational", {}};
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    p.effects.push_back(e);
  }
  return p;
}

Povm product_basis_measurement(const std::vector<Matrix>& local_bases, const Bipartition& cut, std::string name) {
  if (local_bases.size() != cut.dims.size()) throw std::invalid_argument("product_basis_measurement: one basis per factor");
  Matrix u = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < local_bases.size(); ++k) {
    if (local_bases[k].rows() != cut.dims[k]) throw std::invalid_argument("product_basis_measurement: basis size mismatch");
    u = kron(u, local_bases[k]);
  }
  Povm p{std::move(name), {}};
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    Vector v = u.col(i);
    p.effects.push_back(v * v.adjoint());
  }
  return p;
}

MeasurementFamily default_family(const Bipartition& cut, int n_random, std::uint64_t seed) {
  MeasurementFamily f;
  f.cut = cut;
  f.provenance = std::string("default_family/") + kRngName + "/seed=" + std::to_string(seed) +
                 "/n_random=" + std::to_string(n_random);
  const int da = cut.dim_a(), db = cut.dim_b();
  if (da == db) {
    Povm det = detection_measurement(da);
    for (Matrix& e : det.effects) e = from_a_first(e, cut);
    f.povms.push_back(det);
  }
  f.povms.push_back(computational_measurement(cut));
  if (da == db && has_mub_construction(da)) {
    for (Povm p : mub_detection(da)) {
      for (Matrix& e : p.effects) e = from_a_first(e, cut);
      f.povms.push_back(std::move(p));
    }
  }
  Rng rng(seed);
  for (int r = 0; r < n_random; ++r) {
    std::vector<Matrix> bases;
    for (int d : cut.dims) bases.push_back(rng.haar_unitary(d));
    f.povms.push_back(product_basis_measurement(bases, cut, "random-product-" + std::to_string(r)));
  }
  return f;
}

}  // namespace resmono
