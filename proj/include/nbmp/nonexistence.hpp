#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "nbmp/bounds.hpp"
#include "nbmp/errors.hpp"

namespace nbmp {

/// Three-species degenerate system
///   d_i (u_i^2)'' + theta u_i' + u_i (sigma_i - sum_j c_ij u_j) = 0, i = 1..3,
/// with optional limits w(-inf), w(+inf) of the third species.
struct ThreeSpeciesParams {
  std::array<double, 3> d{};
  std::array<double, 3> sigma{};
  std::array<std::array<double, 3>, 3> C{};
  std::optional<double> w_minus_inf;
  std::optional<double> w_plus_inf;

  double c(int i, int j) const { return C[i - 1][j - 1]; }
};

/// Profile hypotheses the parameters cannot decide. They are taken as given
/// unless the caller says otherwise.
struct ProfileAssumptions {
  bool H0 = true;  // (u, v, w) positive, bounded
  bool H1 = true;  // boundary limits exist
  bool H4 = true;  // w attains an interior minimum
};

struct CaseIVerdict {
  bool applicable = false;  // phi1 > 0 and phi2 > 0
  double phi1 = 0.0;
  double phi2 = 0.0;
  double ulow_star = 0.0;
  double vlow_star = 0.0;
  double lambda_star = 0.0;
  bool blocked = false;  // applicable and lambda_star >= sigma3
  bool H0_asserted = true;
  bool H1_asserted = true;
};

struct CaseIIVerdict {
  bool applicable = false;  // lambda_star_upper < sigma3
  double ubar_star = 0.0;
  double vbar_star = 0.0;
  double lambda_star_upper = 0.0;
  double threshold = 0.0;  // (sigma3 - lambda_star_upper) / c33
  bool conclusive = false; // some w limit was supplied
  bool blocked = false;
  bool H4_asserted = true;
};

struct NonexistenceVerdict {
  CaseIVerdict case_i;
  CaseIIVerdict case_ii;
};

inline void validate(const ThreeSpeciesParams& p) {
  for (int i = 0; i < 3; ++i) {
    detail::require_domain(std::isfinite(p.d[i]) && p.d[i] > 0.0, "d must be positive");
    detail::require_domain(std::isfinite(p.sigma[i]) && p.sigma[i] > 0.0, "sigma must be positive");
    for (int j = 0; j < 3; ++j) {
      detail::require_domain(std::isfinite(p.C[i][j]) && p.C[i][j] > 0.0, "C must be positive");
    }
  }
  for (const auto& w : {p.w_minus_inf, p.w_plus_inf}) {
    if (w) detail::require_domain(std::isfinite(*w) && *w >= 0.0, "w limits must be nonnegative");
  }
}

/// Case (i): u and v squeeze w out when sigma3 is at most lambda_star, the
/// two-species m = 2 lower bound with weights (c31, c32).
inline CaseIVerdict check_case_i(const ThreeSpeciesParams& p, const ProfileAssumptions& a = {}) {
  validate(p);
  CaseIVerdict v;
  v.H0_asserted = a.H0;
  v.H1_asserted = a.H1;
  const double s3_over_c33 = p.sigma[2] / p.c(3, 3);
  v.phi1 = p.sigma[0] - p.c(1, 3) * s3_over_c33;
  v.phi2 = p.sigma[1] - p.c(2, 3) * s3_over_c33;
  v.applicable = v.phi1 > 0.0 && v.phi2 > 0.0;
  if (!v.applicable) return v;
  v.ulow_star = std::min(v.phi1 / p.c(1, 1), v.phi2 / p.c(2, 1));
  v.vlow_star = std::min(v.phi1 / p.c(1, 2), v.phi2 / p.c(2, 2));
  v.lambda_star = two_species_m2_lower(p.c(3, 1), p.c(3, 2), p.d[0], p.d[1], v.ulow_star, v.vlow_star);
  v.blocked = a.H0 && a.H1 && v.lambda_star >= p.sigma[2];
  return v;
}

/// Case (ii): w cannot dip below (sigma3 - lambda^*)/c33 at either end when
/// sigma3 exceeds lambda^*, the two-species m = 2 upper bound.
inline CaseIIVerdict check_case_ii(const ThreeSpeciesParams& p, const ProfileAssumptions& a = {}) {
  validate(p);
  CaseIIVerdict v;
  v.H4_asserted = a.H4;
  v.ubar_star = std::max(p.sigma[0] / p.c(1, 1), p.sigma[1] / p.c(2, 1));
  v.vbar_star = std::max(p.sigma[0] / p.c(1, 2), p.sigma[1] / p.c(2, 2));
  v.lambda_star_upper =
      two_species_m2_upper(p.c(3, 1), p.c(3, 2), p.d[0], p.d[1], v.ubar_star, v.vbar_star);
  v.threshold = (p.sigma[2] - v.lambda_star_upper) / p.c(3, 3);
  v.applicable = v.lambda_star_upper < p.sigma[2];
  std::optional<double> w_min;
  for (const auto& w : {p.w_minus_inf, p.w_plus_inf}) {
    if (w) w_min = w_min ? std::min(*w_min, *w) : *w;
  }
  v.conclusive = w_min.has_value();
  v.blocked = a.H4 && v.applicable && v.conclusive && *w_min < v.threshold;
  return v;
}

inline NonexistenceVerdict check_nonexistence(const ThreeSpeciesParams& p,
                                              const ProfileAssumptions& a = {}) {
  return {check_case_i(p, a), check_case_ii(p, a)};
}

}  // namespace nbmp
