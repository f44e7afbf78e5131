#pragma once

// Gradient-free local minimization (Hooke-Jeeves pattern search).

#include <functional>
#include <limits>

#include "resmono/linalg.hpp"

namespace resmono {

struct PatternSearchOptions {
  double initial_step = 0.5;
  double min_step = 1e-7;
  double shrink = 0.5;
  int max_evals = 200000;
  /// Stops as soon as the value drops to `target`.
  double target = -std::numeric_limits<double>::infinity();
};

struct PatternSearchResult {
  RealVector x;
  double value = 0.0;
  int evals = 0;
  double final_step = 0.0;
};

PatternSearchResult pattern_search(const std::function<double(const RealVector&)>& f, RealVector x0,
                                   const PatternSearchOptions& opts = {});

}  // namespace resmono
