#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "nbmp/barrier.hpp"
#include "nbmp/errors.hpp"
#include "nbmp/model.hpp"

namespace nbmp {

enum class BoundsBranch { m1, general, two_species_m2 };

inline const char* to_string(BoundsBranch b) {
  switch (b) {
    case BoundsBranch::m1:
      return "m1";
    case BoundsBranch::general:
      return "general";
    case BoundsBranch::two_species_m2:
      return "two_species_m2";
  }
  return "general";
}

/// A-priori bounds lower <= sum alpha_i u_i(x) <= upper.
struct BoundsResult {
  double lower = 0.0;
  double upper = 0.0;
  int chi = 1;
  BoundsBranch branch = BoundsBranch::general;
};

namespace detail {

inline void require_chi(int chi) {
  if (chi != 0 && chi != 1) throw UsageError("chi must be 0 or 1");
}

inline void require_bounds_inputs(std::span<const double> alpha, std::span<const double> d,
                                  const HullBounds& hull) {
  require_domain(!alpha.empty(), "alpha must not be empty");
  require_length(d, alpha.size(), "d");
  require_positive(alpha, "alpha");
  require_positive(d, "d");
  validate(hull);
  require_length(hull.ubar, alpha.size(), "hull");
}

}  // namespace detail

/// Linear diffusion (m = 1):
///   upper = (max_i alpha_i ubar_i)(max_i d_i)/(min_i d_i)
///   lower = (min_i alpha_i ulow_i)(min_i d_i)/(max_i d_i) * chi
inline BoundsResult bounds_m1(std::span<const double> alpha, std::span<const double> d,
                              const HullBounds& hull, int chi) {
  detail::require_chi(chi);
  detail::require_bounds_inputs(alpha, d, hull);
  double max_top = 0.0;
  double min_bottom = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    max_top = std::max(max_top, alpha[i] * hull.ubar[i]);
    min_bottom = std::min(min_bottom, alpha[i] * hull.ulow[i]);
  }
  const auto [dmin, dmax] = std::minmax_element(d.begin(), d.end());
  BoundsResult out;
  out.chi = chi;
  out.branch = BoundsBranch::m1;
  out.upper = max_top * (*dmax) / (*dmin);
  out.lower = chi == 0 ? 0.0 : min_bottom * (*dmin) / (*dmax);
  return out;
}

/// Porous-medium diffusion (m > 1). Both bounds are the eta2 of the
/// corresponding N-barrier; the closed-form displays give the same
/// numbers and are cross-checked in the tests.
inline BoundsResult bounds_general(std::span<const double> alpha, std::span<const double> d,
                                   const HullBounds& hull, double m, int chi) {
  detail::require_chi(chi);
  detail::require_bounds_inputs(alpha, d, hull);
  if (!(std::isfinite(m) && m > 1.0)) {
    throw DomainError("bounds_general needs m > 1; use bounds_m1 for linear diffusion");
  }
  BoundsResult out;
  out.chi = chi;
  out.branch = BoundsBranch::general;
  out.upper = build_upper_barrier(alpha, d, hull.ubar, m).eta2;
  out.lower = chi == 0 ? 0.0 : build_lower_barrier(alpha, d, hull.ulow, m).eta2;
  return out;
}

/// Two species, m = 2, upper bound:
///   (a1/d1 + a2/d2) sqrt(max(d1/a1, d2/a2) max(a1 d1 ubar1^2, a2 d2 ubar2^2))
inline double two_species_m2_upper(double a1, double a2, double d1, double d2, double ubar1,
                                   double ubar2) {
  return (a1 / d1 + a2 / d2) *
         std::sqrt(std::max(d1 / a1, d2 / a2) * std::max(a1 * d1 * ubar1 * ubar1, a2 * d2 * ubar2 * ubar2));
}

/// Two species, m = 2, lower bound (without the chi factor):
///   d1 d2 ulow1 ulow2 min(a1/d1, a2/d2) sqrt(a1 a2 / ((a1 d1 ulow1^2 + a2 d2 ulow2^2)(a1 d2 + a2 d1)))
inline double two_species_m2_lower(double a1, double a2, double d1, double d2, double ulow1,
                                   double ulow2) {
  const double ellipse = a1 * d1 * ulow1 * ulow1 + a2 * d2 * ulow2 * ulow2;
  return d1 * d2 * ulow1 * ulow2 * std::min(a1 / d1, a2 / d2) *
         std::sqrt(a1 * a2 / (ellipse * (a1 * d2 + a2 * d1)));
}

inline BoundsResult bounds_two_species_m2(double alpha1, double alpha2, double d1, double d2,
                                          const HullBounds& hull, int chi) {
  detail::require_chi(chi);
  const double alpha[] = {alpha1, alpha2};
  const double d[] = {d1, d2};
  detail::require_bounds_inputs(alpha, d, hull);
  BoundsResult out;
  out.chi = chi;
  out.branch = BoundsBranch::two_species_m2;
  out.upper = two_species_m2_upper(alpha1, alpha2, d1, d2, hull.ubar[0], hull.ubar[1]);
  out.lower = chi == 0 ? 0.0
                       : two_species_m2_lower(alpha1, alpha2, d1, d2, hull.ulow[0], hull.ulow[1]);
  return out;
}

/// Picks the branch from m: m == 1 uses bounds_m1, otherwise bounds_general.
inline BoundsResult bounds_for(const SystemSpec& spec, std::span<const double> alpha,
                               const HullBounds& hull, int chi) {
  validate(spec);
  if (spec.m == 1.0) return bounds_m1(alpha, spec.d, hull, chi);
  return bounds_general(alpha, spec.d, hull, spec.m, chi);
}

}  // namespace nbmp
