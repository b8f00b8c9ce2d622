#pragma once

#include <vector>

#include "kaonlab/errors.hpp"

namespace kaonlab {

/// n points from lo to hi inclusive. n == 1 requires lo == hi.
inline std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 1) throw ValidationError("grid needs at least one point");
  if (n == 1) {
    if (lo != hi) throw ValidationError("a single-point grid needs lo == hi");
    return {lo};
  }
  if (!(lo < hi)) throw ValidationError("grid needs lo < hi");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + step * i;
  g.back() = hi;
  return g;
}

}  // namespace kaonlab
