#pragma once

// Registry of the monotones exposed to the suites and the CLI. A suite may
// only assert a property that the monotone declares.

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "resmono/records.hpp"
#include "resmono/states.hpp"

namespace resmono {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Property { kAdditive, kStronglySuperadditive, kNormalized, kAsymptoticallyContinuous };

const char* to_string(Property p);

struct Monotone {
  std::string name;
  std::string description;
  std::set<Property> properties;
  /// Needs a two-party cut on the input.
  bool bipartite = true;
  /// Interval for the value; exact values have lower == upper. The seed
  /// drives any randomized search or measurement family.
  std::function<BoundInterval(const DensityMatrix&, std::uint64_t seed)> evaluate;

  bool declares(Property p) const { return properties.count(p) > 0; }
  /// Throws ConfigError unless `p` is declared.
  void require(Property p) const;
};

/// ree, mree, cr, q, cf, sq, cemi.
const std::vector<Monotone>& monotones();
/// Throws ConfigError for unknown names.
const Monotone& find_monotone(const std::string& name);

}  // namespace resmono
