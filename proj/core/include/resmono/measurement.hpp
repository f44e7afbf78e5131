#pragma once

// POVMs and finite families of PPT measurements.

#include <cstdint>
#include <string>
#include <vector>

#include "resmono/linalg.hpp"
#include "resmono/states.hpp"

namespace resmono {

/// Non-negative reals summing to 1 within 1e-12. Entries in [-1e-12, 0) are
/// clipped to zero; anything more negative throws std::invalid_argument.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(std::vector<double> p);

  /// Clips negatives above -tol to zero and rescales to unit sum; throws if
  /// the input is not a probability vector up to `tol`.
  static ProbVector normalized(std::vector<double> p, double tol = 1e-9);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }

 private:
  std::vector<double> p_;
};

struct Povm {
  std::string name;
  std::vector<Matrix> effects;

  /// Outcome distribution Tr[E_i rho].
  ProbVector probabilities(const Matrix& rho) const;
  /// Linear image (Tr[E_i X])_i of an arbitrary Hermitian X.
  std::vector<double> apply(const Matrix& x) const;
};

struct MeasurementFamily {
  Bipartition cut;
  std::string cone_tag = "PPT";
  std::string provenance;
  std::vector<Povm> povms;

  /// Throws std::invalid_argument unless every effect is PSD and PPT within
  /// 1e-10 and the effects of each POVM sum to the identity within 1e-10.
  void validate() const;
};

/// E = sum_i |ii><ii| on C^d (x) C^d, returned as the POVM (E, I - E).
Povm detection_measurement(int d);

/// Projective product measurement in the computational basis.
Povm computational_measurement(const Bipartition& cut);

/// Product of local orthonormal bases (columns of the given unitaries).
Povm product_basis_measurement(const std::vector<Matrix>& local_bases, const Bipartition& cut, std::string name);

/// Mutually unbiased bases of C^d for d prime and d = 4 (d + 1 bases; columns
/// are basis vectors). Throws std::invalid_argument for other d.
std::vector<Matrix> mutually_unbiased_bases(int d);
bool has_mub_construction(int d);

/// For each basis V of a complete MUB set the two-outcome POVM
/// (E_V, I - E_V) with E_V = sum_j |v_j><v_j| (x) |conj v_j><conj v_j|.
/// Each E_V is separable, so the POVMs are PPT.
std::vector<Povm> mub_detection(int d);

/// detection_measurement, the computational product measurement, the MUB
/// detection POVMs (two-party d x d cuts with a known MUB set) and `n_random`
/// products of Haar-random local bases. Every effect is a sum of product
/// projectors, hence PPT. Local bases act on the factors of `cut.dims`.
MeasurementFamily default_family(const Bipartition& cut, int n_random, std::uint64_t seed);

}  // namespace resmono
