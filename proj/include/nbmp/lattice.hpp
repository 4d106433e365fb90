#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nbmp/errors.hpp"

namespace nbmp {

/// Regular barycentric lattice on the standard simplex.
///
/// With `interior == false` the callback receives every point s with
/// s_i = k_i / resolution, k_i >= 0 and sum k_i == resolution (the face
/// sum s_i = 1, vertices included). With `interior == true` the constraint
/// is relaxed to sum k_i <= resolution, which also covers the origin.
/// Enumeration order is lexicographic in k and therefore deterministic.
template <typename Fn>
void for_each_simplex_point(std::size_t dim, std::size_t resolution,
                            bool interior, Fn&& fn) {
  if (dim == 0) throw UsageError("simplex lattice needs at least one axis");
  if (resolution == 0) throw UsageError("simplex lattice resolution must be positive");

  std::vector<std::size_t> k(dim, 0);
  std::vector<double> s(dim, 0.0);
  const double inv = 1.0 / static_cast<double>(resolution);

  // Recursive walk over the first dim-1 coordinates; the last one is
  // either fixed by the face constraint or swept over the slack.
  auto visit = [&](auto&& self, std::size_t axis, std::size_t remaining) -> void {
    if (axis + 1 == dim) {
      if (interior) {
        for (std::size_t last = 0; last <= remaining; ++last) {
          k[axis] = last;
          for (std::size_t i = 0; i < dim; ++i) s[i] = static_cast<double>(k[i]) * inv;
          fn(std::span<const double>(s));
        }
      } else {
        k[axis] = remaining;
        for (std::size_t i = 0; i < dim; ++i) s[i] = static_cast<double>(k[i]) * inv;
        fn(std::span<const double>(s));
      }
      return;
    }
    for (std::size_t ki = 0; ki <= remaining; ++ki) {
      k[axis] = ki;
      self(self, axis + 1, remaining - ki);
    }
  };
  visit(visit, 0, resolution);
}

/// Number of points visited by for_each_simplex_point; used to refuse
/// lattices that would take unreasonably long.
inline double simplex_lattice_size(std::size_t dim, std::size_t resolution, bool interior) {
  // C(resolution + dim - 1, dim - 1) on the face, C(resolution + dim, dim) with interior.
  const std::size_t top = interior ? dim : dim - 1;
  double count = 1.0;
  for (std::size_t i = 1; i <= top; ++i) {
    count *= static_cast<double>(resolution + i);
    count /= static_cast<double>(i);
  }
  return count;
}

}  // namespace nbmp
