#pragma once

// Seeded random numbers with a fixed stream-splitting rule.
//
// Generator: std::mt19937_64 ("resmono-rng/1"). A child stream for trial index
// i of a parent seed s is seeded with splitmix64(s ^ splitmix64(i + c)) where c
// is the golden-ratio constant 0x9e3779b97f4a7c15. Normal variates use our own
// Box-Muller transform because the standard distributions are not specified
// bit-for-bit across library implementations.

#include <cstdint>
#include <random>

#include "resmono/linalg.hpp"

namespace resmono {

inline constexpr const char* kRngName = "resmono-rng/1";

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream `index` derived from `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent generator for substream `index`.
  Rng child(std::uint64_t index) const { return Rng(substream_seed(seed_, index)); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  Complex complex_normal();

  /// Matrix with i.i.d. standard complex Gaussian entries (E|z|^2 = 1).
  Matrix ginibre(int rows, int cols);
  /// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
  Matrix haar_unitary(int d);
  /// Haar-distributed unit vector.
  Vector haar_vector(int d);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace resmono
