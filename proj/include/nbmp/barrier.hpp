#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nbmp/errors.hpp"
#include "nbmp/lattice.hpp"
#include "nbmp/model.hpp"

namespace nbmp {

/// Plane/level-set tangency: the hyper-ellipsoid sum alpha_i d_i u_i^m = Lambda
/// touching a given hyperplane at `point` (all components positive).
struct TangencyResult {
  double Lambda = 0.0;
  Vector point;
};

enum class Orientation { lower, upper };

inline const char* to_string(Orientation o) { return o == Orientation::lower ? "lower" : "upper"; }

/// The four scalars of an N-barrier together with the data that defines the
/// level sets P_eta = {sum alpha_i u_i <= eta} and
/// Q_lambda = {sum alpha_i d_i u_i^m <= lambda} in the closed positive orthant.
///
/// Lower orientation: P_eta2 ⊂ Q_lambda2 ⊂ P_eta1 ⊂ Q_lambda1 ⊂ {sum u_i/ulow_i <= 1}.
/// Upper orientation: {sum u_i/ubar_i <= 1} ⊂ Q_lambda1 ⊂ P_eta1 ⊂ Q_lambda2 ⊂ P_eta2.
struct BarrierEnvelope {
  double lambda1 = 0.0;
  double eta1 = 0.0;
  double lambda2 = 0.0;
  double eta2 = 0.0;
  Orientation orientation = Orientation::lower;
  Vector alpha;
  double m = 2.0;
  Vector d;
  // Tangent points of the two tangency steps of the construction.
  Vector first_tangent;
  Vector second_tangent;
};

namespace detail {

inline void require_barrier_inputs(std::span<const double> alpha, std::span<const double> d,
                                   double m) {
  if (!(std::isfinite(m) && m > 1.0)) {
    throw DomainError("exponent domain error: tangency formulas need m > 1 (1/(m-1) is singular), got m = " +
                      std::to_string(m));
  }
  require_domain(!alpha.empty(), "alpha must not be empty");
  require_length(d, alpha.size(), "d");
  require_positive(alpha, "alpha");
  require_positive(d, "d");
}

/// min_i alpha_i^{m-1} / d_i
inline double min_alpha_power_over_d(std::span<const double> alpha, std::span<const double> d,
                                     double m) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    best = std::min(best, std::pow(alpha[i], m - 1.0) / d[i]);
  }
  return best;
}

/// max_i d_i / alpha_i^{m-1}
inline double max_d_over_alpha_power(std::span<const double> alpha, std::span<const double> d,
                                     double m) {
  double best = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    best = std::max(best, d[i] / std::pow(alpha[i], m - 1.0));
  }
  return best;
}

inline double weighted_power_sum(std::span<const double> alpha, std::span<const double> d,
                                 std::span<const double> u, double m) {
  double q = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) q += alpha[i] * d[i] * std::pow(u[i], m);
  return q;
}

inline double weighted_sum(std::span<const double> alpha, std::span<const double> u) {
  double p = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) p += alpha[i] * u[i];
  return p;
}

}  // namespace detail

/// Tangency of sum alpha_i d_i u_i^m = Lambda with the plane sum u_i/ulow_i = Theta:
///   Lambda = Theta^m (sum_i (alpha_i d_i ulow_i^m)^{-1/(m-1)})^{1-m}
///   u_i    = Theta / S * (alpha_i d_i ulow_i)^{-1/(m-1)},  S = sum_j (alpha_j d_j ulow_j^m)^{-1/(m-1)}.
inline TangencyResult tangency_weighted(double Theta, std::span<const double> alpha,
                                        std::span<const double> d, std::span<const double> ulow,
                                        double m) {
  detail::require_barrier_inputs(alpha, d, m);
  detail::require_length(ulow, alpha.size(), "ulow");
  detail::require_positive(ulow, "ulow");
  detail::require_domain(std::isfinite(Theta) && Theta > 0.0, "Theta must be positive");

  const double inv = 1.0 / (m - 1.0);
  const std::size_t n = alpha.size();
  double S = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    S += std::pow(alpha[i] * d[i] * std::pow(ulow[i], m), -inv);
  }
  TangencyResult out;
  out.Lambda = std::pow(Theta, m) * std::pow(S, 1.0 - m);
  out.point.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.point[i] = Theta / S * std::pow(alpha[i] * d[i] * ulow[i], -inv);
  }
  return out;
}

/// Tangency of sum alpha_i d_i u_i^m = Lambda with the plane sum alpha_i u_i = Theta:
///   Lambda = Theta^m (sum_i alpha_i d_i^{-1/(m-1)})^{1-m},
/// touching where d_i u_i^{m-1} is the same for every i.
inline TangencyResult tangency_plain(double Theta, std::span<const double> alpha,
                                     std::span<const double> d, double m) {
  detail::require_barrier_inputs(alpha, d, m);
  detail::require_domain(std::isfinite(Theta) && Theta > 0.0, "Theta must be positive");

  const double inv = 1.0 / (m - 1.0);
  const std::size_t n = alpha.size();
  double S = 0.0;
  for (std::size_t i = 0; i < n; ++i) S += alpha[i] * std::pow(d[i], -inv);
  TangencyResult out;
  out.Lambda = std::pow(Theta, m) * std::pow(S, 1.0 - m);
  out.point.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.point[i] = Theta / S * std::pow(d[i], -inv);
  return out;
}

/// Lower-bound N-barrier:
///   (i)   lambda1: ellipsoid tangent to the plane sum u_i/ulow_i = 1
///   (ii)  eta1 = (lambda1 min_i alpha_i^{m-1}/d_i)^{1/m}
///   (iii) lambda2: ellipsoid tangent to the plane sum alpha_i u_i = eta1
///   eta2 = (lambda2 min_i alpha_i^{m-1}/d_i)^{1/m} is the lower bound.
inline BarrierEnvelope build_lower_barrier(std::span<const double> alpha, std::span<const double> d,
                                           std::span<const double> ulow, double m) {
  const TangencyResult first = tangency_weighted(1.0, alpha, d, ulow, m);
  const double shrink = detail::min_alpha_power_over_d(alpha, d, m);

  BarrierEnvelope env;
  env.orientation = Orientation::lower;
  env.alpha.assign(alpha.begin(), alpha.end());
  env.d.assign(d.begin(), d.end());
  env.m = m;
  env.lambda1 = first.Lambda;
  env.eta1 = std::pow(env.lambda1 * shrink, 1.0 / m);
  const TangencyResult second = tangency_plain(env.eta1, alpha, d, m);
  env.lambda2 = second.Lambda;
  env.eta2 = std::pow(env.lambda2 * shrink, 1.0 / m);
  env.first_tangent = first.point;
  env.second_tangent = second.point;
  return env;
}

/// Upper-bound N-barrier:
///   (i)   lambda1 = max_i alpha_i d_i ubar_i^m
///   (ii)  eta1: plane sum alpha_i u_i = eta1 tangent to the lambda1 ellipsoid
///   (iii) lambda2 = eta1^m max_i d_i/alpha_i^{m-1}
///   eta2: plane tangent to the lambda2 ellipsoid; this is the upper bound.
inline BarrierEnvelope build_upper_barrier(std::span<const double> alpha, std::span<const double> d,
                                           std::span<const double> ubar, double m) {
  detail::require_barrier_inputs(alpha, d, m);
  detail::require_length(ubar, alpha.size(), "ubar");
  detail::require_positive(ubar, "ubar");

  // Lambda(Theta) = Theta^m * unit, so the plane tangent to level lambda is
  // Theta = (lambda / unit)^{1/m}.
  const double unit = tangency_plain(1.0, alpha, d, m).Lambda;

  BarrierEnvelope env;
  env.orientation = Orientation::upper;
  env.alpha.assign(alpha.begin(), alpha.end());
  env.d.assign(d.begin(), d.end());
  env.m = m;
  env.lambda1 = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    env.lambda1 = std::max(env.lambda1, alpha[i] * d[i] * std::pow(ubar[i], m));
  }
  env.eta1 = std::pow(env.lambda1 / unit, 1.0 / m);
  env.lambda2 = std::pow(env.eta1, m) * detail::max_d_over_alpha_power(alpha, d, m);
  env.eta2 = std::pow(env.lambda2 / unit, 1.0 / m);
  env.first_tangent = tangency_plain(env.eta1, alpha, d, m).point;
  env.second_tangent = tangency_plain(env.eta2, alpha, d, m).point;
  return env;
}

/// One inclusion of the barrier chain, checked two ways.
struct LinkCheck {
  std::string name;
  bool analytic_pass = false;
  bool sampled_pass = false;
  double analytic_margin = 0.0;  // relative slack of the intercept/tangency comparison
  double worst_margin = 0.0;     // smallest relative slack over the sampled boundary
  std::size_t samples = 0;

  bool pass() const { return analytic_pass && sampled_pass; }
};

struct ContainmentReport {
  Orientation orientation = Orientation::lower;
  std::vector<LinkCheck> links;  // innermost link first

  bool pass() const {
    return std::all_of(links.begin(), links.end(), [](const LinkCheck& l) { return l.pass(); });
  }
};

/// Per-axis lattice resolution for boundary sampling: `samples` divisions for
/// n = 2, ceil(samples^{2/n}) for larger n.
inline std::size_t containment_resolution(std::size_t n, std::size_t samples) {
  if (n <= 2) return samples;
  return static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(samples), 2.0 / static_cast<double>(n)) - 1e-9));
}

namespace detail {

/// A boundary set of the chain.
struct ChainSet {
  enum class Kind { plane, ellipsoid, hull } kind;
  double level = 0.0;  // eta, lambda, or 1 for the hull plane
  std::string label;
};

inline double set_value(const ChainSet& s, const BarrierEnvelope& env, std::span<const double> hull,
                        std::span<const double> u) {
  switch (s.kind) {
    case ChainSet::Kind::plane:
      return weighted_sum(env.alpha, u);
    case ChainSet::Kind::ellipsoid:
      return weighted_power_sum(env.alpha, env.d, u, env.m);
    case ChainSet::Kind::hull: {
      double acc = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] / hull[i];
      return acc;
    }
  }
  return 0.0;
}

/// Maps a point of the unit simplex (sum s_i = 1) onto the boundary of `s`.
inline void boundary_point(const ChainSet& s, const BarrierEnvelope& env,
                           std::span<const double> hull, std::span<const double> simplex,
                           Vector& u) {
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    switch (s.kind) {
      case ChainSet::Kind::plane:
        u[i] = s.level * simplex[i] / env.alpha[i];
        break;
      case ChainSet::Kind::ellipsoid:
        u[i] = std::pow(s.level * simplex[i] / (env.alpha[i] * env.d[i]), 1.0 / env.m);
        break;
      case ChainSet::Kind::hull:
        u[i] = s.level * simplex[i] * hull[i];
        break;
    }
  }
}

/// Exact criterion for inner ⊂ outer, returned as relative slack (>= 0 means
/// contained). Sublevel sets of convex functions in the positive orthant:
///  - plane or hull simplex inside a convex set: compare the vertices;
///  - ellipsoid inside a half-space: compare with the tangent level.
inline double analytic_margin(const ChainSet& inner, const ChainSet& outer,
                              const BarrierEnvelope& env, std::span<const double> hull) {
  const std::size_t n = env.alpha.size();
  if (inner.kind != ChainSet::Kind::ellipsoid) {
    double worst = std::numeric_limits<double>::infinity();
    Vector vertex(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(vertex.begin(), vertex.end(), 0.0);
      vertex[j] = inner.kind == ChainSet::Kind::plane ? inner.level / env.alpha[j]
                                                      : inner.level * hull[j];
      const double v = set_value(outer, env, hull, vertex);
      worst = std::min(worst, (outer.level - v) / outer.level);
    }
    return worst;
  }
  // Ellipsoid inside a plane-type half-space: the largest admissible level is
  // the one whose ellipsoid is tangent to the outer plane.
  double tangent_level = 0.0;
  if (outer.kind == ChainSet::Kind::plane) {
    tangent_level = tangency_plain(outer.level, env.alpha, env.d, env.m).Lambda;
  } else if (outer.kind == ChainSet::Kind::hull) {
    tangent_level = tangency_weighted(outer.level, env.alpha, env.d, hull, env.m).Lambda;
  } else {
    tangent_level = outer.level;  // nested ellipsoids of the same family
  }
  return (tangent_level - inner.level) / tangent_level;
}

inline std::vector<ChainSet> chain_sets(const BarrierEnvelope& env) {
  using K = ChainSet::Kind;
  if (env.orientation == Orientation::lower) {
    return {{K::plane, env.eta2, "P_eta2"},
            {K::ellipsoid, env.lambda2, "Q_lambda2"},
            {K::plane, env.eta1, "P_eta1"},
            {K::ellipsoid, env.lambda1, "Q_lambda1"},
            {K::hull, 1.0, "R_lower"}};
  }
  return {{K::hull, 1.0, "R_upper_complement"},
          {K::ellipsoid, env.lambda1, "Q_lambda1"},
          {K::plane, env.eta1, "P_eta1"},
          {K::ellipsoid, env.lambda2, "Q_lambda2"},
          {K::plane, env.eta2, "P_eta2"}};
}

}  // namespace detail

/// Checks every inclusion of the envelope's chain against the hull (ulow for
/// the lower orientation, ubar for the upper one).
///
/// Each link is checked (a) exactly, by intercept or tangency comparison, and
/// (b) by sampling the inner set's outer boundary on a barycentric lattice and
/// evaluating the outer set's defining function. Both use a relative
/// tolerance of kRegionTolerance.
inline ContainmentReport verify_containment(const BarrierEnvelope& env, const HullBounds& hull,
                                            std::size_t samples, Orientation chain) {
  if (chain != env.orientation) {
    throw UsageError(std::string("requested ") + to_string(chain) + " chain for a " +
                     to_string(env.orientation) + " envelope");
  }
  detail::require_barrier_inputs(env.alpha, env.d, env.m);
  validate(hull);
  const std::size_t n = env.alpha.size();
  detail::require_length(hull.ubar, n, "hull");
  if (samples == 0) throw UsageError("samples must be positive");

  const std::span<const double> axis =
      env.orientation == Orientation::lower ? std::span<const double>(hull.ulow)
                                            : std::span<const double>(hull.ubar);
  const auto sets = detail::chain_sets(env);
  const std::size_t resolution = containment_resolution(n, samples);
  if (simplex_lattice_size(n, resolution, false) > detail::kMaxLatticePoints) {
    throw UsageError("containment lattice too large; lower samples");
  }

  ContainmentReport report;
  report.orientation = env.orientation;
  Vector u(n);
  for (std::size_t k = 0; k + 1 < sets.size(); ++k) {
    const auto& inner = sets[k];
    const auto& outer = sets[k + 1];
    LinkCheck link;
    link.name = inner.label + " in " + outer.label;
    link.analytic_margin = detail::analytic_margin(inner, outer, env, axis);
    link.analytic_pass = link.analytic_margin >= -kRegionTolerance;
    link.worst_margin = std::numeric_limits<double>::infinity();
    for_each_simplex_point(n, resolution, false, [&](std::span<const double> s) {
      detail::boundary_point(inner, env, axis, s, u);
      const double v = detail::set_value(outer, env, axis, u);
      link.worst_margin = std::min(link.worst_margin, (outer.level - v) / outer.level);
      ++link.samples;
    });
    link.sampled_pass = link.worst_margin >= -kRegionTolerance;
    report.links.push_back(std::move(link));
  }
  return report;
}

inline ContainmentReport verify_containment(const BarrierEnvelope& env, const HullBounds& hull,
                                            std::size_t samples = 100) {
  return verify_containment(env, hull, samples, env.orientation);
}

/// One boundary sample for plotting: set label and coordinates.
struct CurvePoint {
  std::string set;
  Vector u;
};

/// Boundary samples of every set in the chain (hull plane, both planes, both
/// ellipsoids), `samples` divisions per face.
inline std::vector<CurvePoint> barrier_curves(const BarrierEnvelope& env, const HullBounds& hull,
                                              std::size_t samples) {
  detail::require_barrier_inputs(env.alpha, env.d, env.m);
  validate(hull);
  const std::size_t n = env.alpha.size();
  detail::require_length(hull.ubar, n, "hull");
  const std::span<const double> axis =
      env.orientation == Orientation::lower ? std::span<const double>(hull.ulow)
                                            : std::span<const double>(hull.ubar);
  const std::size_t resolution = containment_resolution(n, samples);
  std::vector<CurvePoint> out;
  Vector u(n);
  for (const auto& set : detail::chain_sets(env)) {
    for_each_simplex_point(n, resolution, false, [&](std::span<const double> s) {
      detail::boundary_point(set, env, axis, s, u);
      out.push_back({set.label, u});
    });
  }
  return out;
}

}  // namespace nbmp
