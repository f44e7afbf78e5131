#pragma once

// Density matrices with subsystem metadata, standard state families and
// seeded random sampling.
//
// Werner states use the parameter p = Tr[F rho] in [-1, 1], F the swap:
//   werner(d, p) = a I + b F,  a = (d - p) / (d (d^2 - 1)),  b = (d p - 1) / (d (d^2 - 1)).
// p = -1 is the normalized antisymmetric projector, p = 1 the symmetric one.
//
// The tiles state is the normalized projector onto the orthogonal complement
// of the five-vector "tiles" unextendible product basis in 3x3 (Bennett,
// DiVincenzo, Mor, Shor, Smolin, Terhal, PRL 82, 5385 (1999)):
//   |0>(|0>-|1>)/sqrt2, (|0>-|1>)|2>/sqrt2, |2>(|1>-|2>)/sqrt2,
//   (|1>-|2>)|0>/sqrt2, (|0>+|1>+|2>)(|0>+|1>+|2>)/3.

#include <cstdint>
#include <optional>
#include <vector>

#include "resmono/linalg.hpp"
#include "resmono/rng.hpp"

namespace resmono {

/// An A:B split of the subsystems of a composite system. `side_a` lists the
/// subsystem indices on the A side; all others are on the B side.
struct Bipartition {
  Dims dims;
  std::vector<int> side_a;

  std::vector<int> side_b() const;
  int dim_a() const;
  int dim_b() const;
  /// Permutation that puts the A-side factors first, each side keeping its
  /// original order.
  std::vector<int> a_first_order() const;

  /// Standard two-party split {0} : {1}.
  static Bipartition two_party(int da, int db) { return {{da, db}, {0}}; }
};

class DensityMatrix {
 public:
  /// Validates Hermiticity (symmetrizing), Tr = 1 within 1e-10, smallest
  /// eigenvalue >= -1e-10 and that prod(dims) equals the matrix size. Throws
  /// std::invalid_argument on violation. An empty cut means "no bipartition".
  DensityMatrix(Matrix m, Dims dims, std::vector<int> cut = {});

  /// Single-system convenience: dims = {m.rows()}.
  explicit DensityMatrix(Matrix m);

  const Matrix& matrix() const { return m_; }
  const Dims& dims() const { return dims_; }
  const std::vector<int>& cut() const { return cut_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  bool has_cut() const { return !cut_.empty(); }

  /// Throws std::invalid_argument when no cut was given.
  Bipartition bipartition() const;

  /// Reduced state on `keep`. The cut is restricted to the kept subsystems
  /// (and dropped if it becomes trivial).
  DensityMatrix marginal(const std::vector<int>& keep) const;

  /// rho (x) other. The A side of the result is the union of both A sides.
  DensityMatrix tensor(const DensityMatrix& other) const;

  /// Same matrix and dims with another cut.
  DensityMatrix with_cut(std::vector<int> cut) const;

  /// Reordered to (A-side factors, B-side factors) and regarded as a
  /// two-party state with dims {dA, dB}, cut {0}.
  DensityMatrix as_two_party() const;

  double purity() const;

 private:
  Matrix m_;
  Dims dims_;
  std::vector<int> cut_;
};

/// Pure state |psi><psi| with the given dims and cut; psi is normalized.
DensityMatrix pure_state(const Vector& psi, Dims dims, std::vector<int> cut = {});

DensityMatrix max_entangled(int d);
DensityMatrix plus_state();
DensityMatrix maximally_mixed(const Dims& dims, std::vector<int> cut = {});

/// p Phi_d + (1 - p)(I - Phi_d)/(d^2 - 1), p in [0, 1].
DensityMatrix isotropic(int d, double p);
/// See the header comment for the convention; p in [-1, 1].
DensityMatrix werner(int d, double p);
DensityMatrix tiles_upb();

/// Swap operator on C^d (x) C^d.
Matrix swap_operator(int d);

/// Hilbert-Schmidt random state: G G^dag / Tr with G of size dim x rank.
/// rank <= 0 means full rank.
DensityMatrix random_density(const Dims& dims, Rng& rng, int rank = 0, std::vector<int> cut = {});
DensityMatrix random_density(int d, std::uint64_t seed);
DensityMatrix random_pure(const Dims& dims, Rng& rng, std::vector<int> cut = {});
DensityMatrix random_pure(int d, std::uint64_t seed);
/// U_1 (x) ... (x) U_n with Haar-random factors.
Matrix random_local_unitary(const Dims& dims, Rng& rng);
Matrix random_local_unitary(const Dims& dims, std::uint64_t seed);
/// Random mixture of `terms` random product states across the two-party
/// split {0}:{1}. The result is separable, hence PPT.
DensityMatrix random_separable(int da, int db, Rng& rng, int terms = 4);

/// Trace norm of the realigned matrix R_{(ij),(kl)} = rho_{(ik),(jl)} for a
/// two-party state. Values above 1 witness entanglement.
double realignment_norm(const Matrix& rho, int da, int db);

/// Random Hermitian matrix (GUE-like, entries O(1)).
Matrix random_hermitian(int d, Rng& rng);

}  // namespace resmono
