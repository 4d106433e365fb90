#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "nbmp/bounds.hpp"
#include "nbmp/errors.hpp"
#include "nbmp/exact.hpp"
#include "nbmp/grid.hpp"
#include "nbmp/model.hpp"

namespace nbmp {

/// Below this value a component counts as extinct and m > 1 integration stops.
inline constexpr double kFloor = 1e-8;

/// Sampled traveling-wave trajectory. u[k], w[k] are the state at xs[k];
/// w_i = (u_i^m)'. p, q and F are the weighted diagnostic columns
///   p = sum alpha_i u_i,  q = sum alpha_i d_i u_i^m,  F = sum alpha_i u_i^{l_i} f_i(u).
struct Trajectory {
  std::size_t n = 0;
  Vector alpha;
  std::vector<double> xs;
  std::vector<Vector> u;
  std::vector<Vector> w;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> F;
  bool clamped = false;
  bool truncated = false;
  std::string reason;

  std::size_t size() const { return xs.size(); }
};

namespace detail {

inline Vector resolve_alpha(std::span<const double> alpha, std::size_t n) {
  if (alpha.empty()) return Vector(n, 1.0);
  require_length(alpha, n, "alpha");
  require_positive(alpha, "alpha");
  return Vector(alpha.begin(), alpha.end());
}

inline double prefactor(double u, double l) { return l == 1.0 ? u : std::pow(u, l); }

inline double power(double u, double m) {
  if (m == 1.0) return u;
  if (m == 2.0) return u * u;
  return std::pow(u, m);
}

inline void append_point(Trajectory& t, const SystemSpec& spec, double x, Vector u, Vector w) {
  const Vector f = reaction_eval(spec.reaction, u);
  double p = 0.0, q = 0.0, F = 0.0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    p += t.alpha[i] * u[i];
    q += t.alpha[i] * spec.d[i] * power(u[i], spec.m);
    F += t.alpha[i] * prefactor(u[i], spec.l[i]) * f[i];
  }
  t.xs.push_back(x);
  t.u.push_back(std::move(u));
  t.w.push_back(std::move(w));
  t.p.push_back(p);
  t.q.push_back(q);
  t.F.push_back(F);
}

/// Right-hand side of the first-order system in the state (u, w). Returns
/// false if a stage leaves the region where the reduction is defined.
inline bool wave_rhs(const SystemSpec& spec, const Vector& u, const Vector& w, Vector& du,
                     Vector& dw) {
  const std::size_t n = spec.n;
  Vector uc = u;
  if (spec.m == 1.0) {
    for (double& v : uc) v = std::max(v, 0.0);
  } else {
    for (double v : u) {
      if (!(v >= kFloor)) return false;
    }
  }
  const Vector f = reaction_eval(spec.reaction, uc);
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = spec.m == 1.0 ? w[i] : w[i] / (spec.m * power(u[i], spec.m - 1.0));
    dw[i] = (-spec.theta * du[i] - prefactor(uc[i], spec.l[i]) * f[i]) / spec.d[i];
    if (!std::isfinite(du[i]) || !std::isfinite(dw[i])) return false;
  }
  return true;
}

}  // namespace detail

/// Fixed-step classical RK4 on the first-order reduction
///   u_i' = w_i / (m u_i^{m-1}),  w_i' = (-theta u_i' - u_i^{l_i} f_i(u)) / d_i
/// (for m = 1 the state is (u, u') directly). The span is split into
/// ceil((hi - lo)/step) equal intervals. When m > 1 and a component drops below
/// kFloor the trajectory stops there with `truncated` set; for m = 1 negative
/// components are clamped to zero and `clamped` is set.
inline Trajectory integrate(const SystemSpec& spec, std::span<const double> u0,
                            std::span<const double> w0, GridSpec span,
                            std::span<const double> alpha = {}) {
  validate(spec);
  const std::size_t n = spec.n;
  detail::require_length(u0, n, "u0");
  detail::require_length(w0, n, "w0");
  detail::require_positive(u0, "u0");
  for (double v : w0) detail::require_domain(std::isfinite(v), "w0 must be finite");
  if (!(std::isfinite(span.step) && span.step > 0.0)) throw UsageError("step must be positive");
  const std::vector<double> xs = uniform_grid(span);

  Trajectory t;
  t.n = n;
  t.alpha = detail::resolve_alpha(alpha, n);
  Vector u(u0.begin(), u0.end());
  Vector w(w0.begin(), w0.end());
  detail::append_point(t, spec, xs.front(), u, w);

  Vector k1u(n), k1w(n), k2u(n), k2w(n), k3u(n), k3w(n), k4u(n), k4w(n), su(n), sw(n);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double h = xs[k + 1] - xs[k];
    bool ok = detail::wave_rhs(spec, u, w, k1u, k1w);
    for (std::size_t i = 0; ok && i < n; ++i) {
      su[i] = u[i] + 0.5 * h * k1u[i];
      sw[i] = w[i] + 0.5 * h * k1w[i];
    }
    ok = ok && detail::wave_rhs(spec, su, sw, k2u, k2w);
    for (std::size_t i = 0; ok && i < n; ++i) {
      su[i] = u[i] + 0.5 * h * k2u[i];
      sw[i] = w[i] + 0.5 * h * k2w[i];
    }
    ok = ok && detail::wave_rhs(spec, su, sw, k3u, k3w);
    for (std::size_t i = 0; ok && i < n; ++i) {
      su[i] = u[i] + h * k3u[i];
      sw[i] = w[i] + h * k3w[i];
    }
    ok = ok && detail::wave_rhs(spec, su, sw, k4u, k4w);
    Vector nu(n), nw(n);
    for (std::size_t i = 0; ok && i < n; ++i) {
      nu[i] = u[i] + h / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
      nw[i] = w[i] + h / 6.0 * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i]);
      if (!std::isfinite(nu[i]) || !std::isfinite(nw[i])) ok = false;
    }
    if (ok && spec.m != 1.0) {
      for (double v : nu) {
        if (v < kFloor) ok = false;
      }
    }
    if (!ok) {
      t.truncated = true;
      t.reason = "component left the positive region (below floor " + std::to_string(kFloor) +
                 ") or blew up after x = " + std::to_string(xs[k]);
      break;
    }
    if (spec.m == 1.0) {
      for (double& v : nu) {
        if (v < 0.0) {
          v = 0.0;
          t.clamped = true;
        }
      }
    }
    u = std::move(nu);
    w = std::move(nw);
    detail::append_point(t, spec, xs[k + 1], u, w);
  }
  return t;
}

/// Trajectory read off a closed-form profile: w = (u^m)' from the analytic jet.
inline Trajectory sample_profile(const SystemSpec& spec, const Profile& profile,
                                 std::span<const double> grid, std::span<const double> alpha = {}) {
  validate(spec);
  detail::require_shape(profile.n == spec.n, "profile dimension does not match system");
  Trajectory t;
  t.n = spec.n;
  t.alpha = detail::resolve_alpha(alpha, spec.n);
  for (double x : grid) {
    const PointJet j = profile(x);
    Vector w(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      w[i] = power_jet(j.u[i], j.du[i], j.d2u[i], spec.m).first;
    }
    detail::append_point(t, spec, x, j.u, std::move(w));
  }
  return t;
}

struct BoundViolation {
  double x;
  double p;
  bool above;  // true: p > upper, false: p < lower
};

struct BoundsCheck {
  double min_p = std::numeric_limits<double>::infinity();
  double max_p = -std::numeric_limits<double>::infinity();
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<BoundViolation> violations;

  bool pass() const { return violations.empty(); }
};

/// Scans p = sum alpha_i u_i over the stored grid against [lower, upper].
inline BoundsCheck check_bounds(const Trajectory& traj, std::span<const double> alpha,
                                const BoundsResult& bounds) {
  detail::require_length(alpha, traj.n, "alpha");
  BoundsCheck out;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    double p = 0.0;
    for (std::size_t i = 0; i < traj.n; ++i) p += alpha[i] * traj.u[k][i];
    if (p < out.min_p) {
      out.min_p = p;
      out.x_min = traj.xs[k];
    }
    if (p > out.max_p) {
      out.max_p = p;
      out.x_max = traj.xs[k];
    }
    if (p < bounds.lower) out.violations.push_back({traj.xs[k], p, false});
    if (p > bounds.upper) out.violations.push_back({traj.xs[k], p, true});
  }
  return out;
}

/// Discrete check of q'(x) - q'(x0) + theta (p(x) - p(x0)) + int_{x0}^{x} F = 0
/// with q' = sum alpha_i d_i w_i and trapezoidal quadrature for F.
struct IdentityCheck {
  double max_abs = 0.0;  // worst residual over the grid
  double scale = 0.0;    // largest magnitude among the summed terms
  double relative() const { return scale > 0.0 ? max_abs / scale : max_abs; }
};

inline IdentityCheck integrated_identity(const SystemSpec& spec, const Trajectory& traj) {
  validate(spec);
  detail::require_shape(traj.n == spec.n, "trajectory dimension does not match system");
  IdentityCheck out;
  if (traj.size() == 0) return out;
  auto dq = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < spec.n; ++i) s += traj.alpha[i] * spec.d[i] * traj.w[k][i];
    return s;
  };
  const double dq0 = dq(0);
  double integral = 0.0;
  double integral_abs = 0.0;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double h = traj.xs[k] - traj.xs[k - 1];
    integral += 0.5 * h * (traj.F[k] + traj.F[k - 1]);
    integral_abs += 0.5 * h * (std::abs(traj.F[k]) + std::abs(traj.F[k - 1]));
    const double dqk = dq(k);
    const double dp = spec.theta * (traj.p[k] - traj.p[0]);
    const double r = dqk - dq0 + dp + integral;
    out.max_abs = std::max(out.max_abs, std::abs(r));
    out.scale = std::max({out.scale, std::abs(dqk), std::abs(dq0), std::abs(dp), integral_abs});
  }
  return out;
}

/// Shannon evenness J = -sum iota_i ln iota_i / ln s with iota_i = u_i / sum u.
inline double evenness_index(std::span<const double> u) {
  detail::require_domain(u.size() >= 2, "evenness index needs at least two species");
  detail::require_domain(detail::all_positive(u), "evenness index needs strictly positive abundances");
  const double total = std::accumulate(u.begin(), u.end(), 0.0);
  double H = 0.0;
  for (double v : u) {
    const double iota = v / total;
    H -= iota * std::log(iota);
  }
  return H / std::log(static_cast<double>(u.size()));
}

}  // namespace nbmp
