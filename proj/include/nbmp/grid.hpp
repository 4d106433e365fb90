#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nbmp/errors.hpp"

namespace nbmp {

/// Closed interval [lo, hi] with a nominal spacing.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

/// Number of intervals used for a nominal step: the step is shrunk (never
/// grown) so that the grid lands exactly on `hi`.
inline std::size_t grid_intervals(const GridSpec& g) {
  if (!(std::isfinite(g.lo) && std::isfinite(g.hi) && g.hi > g.lo)) {
    throw UsageError("grid needs finite lo < hi");
  }
  if (!(std::isfinite(g.step) && g.step > 0.0)) throw UsageError("grid step must be positive");
  const double ratio = (g.hi - g.lo) / g.step;
  const double nearest = std::round(ratio);
  const double count = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio);
  if (count > 1e9) throw UsageError("grid has too many points");
  return static_cast<std::size_t>(std::max(1.0, count));
}

/// lo, lo + h, ..., hi with h = (hi - lo) / grid_intervals(g).
inline std::vector<double> uniform_grid(const GridSpec& g) {
  const std::size_t n = grid_intervals(g);
  std::vector<double> xs(n + 1);
  const double h = (g.hi - g.lo) / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) xs[k] = g.lo + static_cast<double>(k) * h;
  xs[n] = g.hi;
  return xs;
}

}  // namespace nbmp
