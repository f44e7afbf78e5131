#include "resmono/optimize.hpp"

namespace resmono {

namespace {

// Exploratory moves around `base` with value `fbase`; returns the improved point.
double explore(const std::function<double(const RealVector&)>& f, RealVector& x, double fx, double step, int& evals) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    x(i) = xi + step;
    double ft = f(x);
    ++evals;
    if (ft < fx) {
      fx = ft;
      continue;
    }
    x(i) = xi - step;
    ft = f(x);
    ++evals;
    if (ft < fx) {
      fx = ft;
      continue;
    }
    x(i) = xi;
  }
  return fx;
}

}  // namespace

PatternSearchResult pattern_search(const std::function<double(const RealVector&)>& f, RealVector x0,
                                   const PatternSearchOptions& opts) {
  PatternSearchResult r;
  r.x = std::move(x0);
  r.value = f(r.x);
  r.evals = 1;
  double step = opts.initial_step;
  while (step >= opts.min_step && r.evals < opts.max_evals && r.value > opts.target) {
    RealVector x = r.x;
    const double fx = explore(f, x, r.value, step, r.evals);
    if (!(fx < r.value)) {
      step *= opts.shrink;
      continue;
    }
    // Pattern moves along the last successful direction.
    RealVector prev = r.x;
    r.x = x;
    r.value = fx;
    while (r.evals < opts.max_evals && r.value > opts.target) {
      RealVector y = 2.0 * r.x - prev;
      const double fy0 = f(y);
      ++r.evals;
      const double fy = explore(f, y, fy0, step, r.evals);
      if (!(fy < r.value)) break;
      prev = r.x;
      r.x = y;
      r.value = fy;
    }
  }
  r.final_step = step;
  return r;
}

}  // namespace resmono
