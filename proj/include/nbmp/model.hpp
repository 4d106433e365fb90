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

namespace nbmp {

using Vector = std::vector<double>;

/// Dense row-major matrix; only what the competition coefficients need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require_shape(rows[i].size() == m.cols_,
                            "matrix row " + std::to_string(i) + " has length " +
                                std::to_string(rows[i].size()) + ", expected " +
                                std::to_string(m.cols_));
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.cols_);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Lotka-Volterra kinetics: f_i(u) = sigma_i - sum_j C_ij u_j.
struct ReactionSpec {
  Vector sigma;
  Matrix C;

  std::size_t size() const { return sigma.size(); }
  friend bool operator==(const ReactionSpec&, const ReactionSpec&) = default;
};

/// n-species degenerate traveling-wave system
///   d_i (u_i^m)'' + theta u_i' + u_i^{l_i} f_i(u) = 0.
struct SystemSpec {
  std::size_t n = 0;
  double m = 1.0;
  Vector d;
  Vector l;
  double theta = 0.0;
  ReactionSpec reaction;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// Per-axis extreme intercepts defining the regions of hypothesis [H]:
/// the lower region sum u_i/ulow_i <= 1 and the upper region sum u_i/ubar_i >= 1.
struct HullBounds {
  Vector ubar;
  Vector ulow;

  std::size_t size() const { return ubar.size(); }
  friend bool operator==(const HullBounds&, const HullBounds&) = default;
};

/// Result of hull_intercepts. `degenerate` lists the axes where ubar == ulow,
/// which hypothesis [H] (strict inequality) does not allow.
struct InterceptHull {
  HullBounds hull;
  std::vector<std::size_t> degenerate;

  bool is_degenerate() const { return !degenerate.empty(); }
};

struct Equilibrium {
  Vector u;
};

/// Tolerances used by the membership and sampling checks.
inline constexpr double kRegionTolerance = 1e-9;      // relative
inline constexpr double kHypothesisTolerance = 1e-12;  // absolute
inline constexpr double kZeroStateTolerance = 1e-12;  // absolute, componentwise

namespace detail {

inline bool all_positive(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

inline void require_positive(std::span<const double> v, const std::string& name) {
  require_domain(all_positive(v), name + " must have strictly positive finite entries");
}

inline void require_length(std::span<const double> v, std::size_t n, const std::string& name) {
  require_shape(v.size() == n, name + " has length " + std::to_string(v.size()) +
                                   ", expected " + std::to_string(n));
}

}  // namespace detail

inline void validate(const ReactionSpec& r) {
  const std::size_t n = r.size();
  detail::require_domain(n >= 1, "reaction needs at least one species");
  detail::require_shape(r.C.rows() == n && r.C.cols() == n,
                        "C must be " + std::to_string(n) + "x" + std::to_string(n));
  detail::require_positive(r.sigma, "sigma");
  detail::require_positive(r.C.data(), "C");
}

inline void validate(const SystemSpec& s) {
  detail::require_domain(s.n >= 1, "n must be at least 1");
  detail::require_domain(std::isfinite(s.m) && s.m >= 1.0, "m must be >= 1");
  detail::require_domain(std::isfinite(s.theta), "theta must be finite");
  detail::require_length(s.d, s.n, "d");
  detail::require_length(s.l, s.n, "l");
  detail::require_length(s.reaction.sigma, s.n, "sigma");
  detail::require_positive(s.d, "d");
  detail::require_positive(s.l, "l");
  validate(s.reaction);
}

/// Checks positivity and ubar_i >= ulow_i. Equality is tolerated here;
/// operations that need the strict form of [H] check it themselves.
inline void validate(const HullBounds& h) {
  detail::require_length(h.ulow, h.ubar.size(), "ulow");
  detail::require_domain(!h.ubar.empty(), "hull must not be empty");
  detail::require_positive(h.ubar, "ubar");
  detail::require_positive(h.ulow, "ulow");
  for (std::size_t i = 0; i < h.size(); ++i) {
    detail::require_domain(h.ubar[i] >= h.ulow[i],
                           "ubar[" + std::to_string(i) + "] < ulow[" + std::to_string(i) + "]");
  }
}

/// f_i(u) = sigma_i - sum_j C_ij u_j (the bracket, without the u_i^{l_i} prefactor).
inline Vector reaction_eval(const ReactionSpec& r, std::span<const double> u) {
  const std::size_t n = r.size();
  detail::require_length(u, n, "u");
  detail::require_shape(r.C.rows() == n && r.C.cols() == n, "C does not match sigma");
  Vector f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = r.sigma[i];
    for (std::size_t j = 0; j < n; ++j) acc -= r.C(i, j) * u[j];
    f[i] = acc;
  }
  return f;
}

/// ubar_i = max_j sigma_j / C_ji and ulow_i = min_j sigma_j / C_ji: the largest
/// and smallest u_i-axis intercepts of the zero planes f_j = 0.
inline InterceptHull hull_intercepts(const ReactionSpec& r) {
  validate(r);
  const std::size_t n = r.size();
  InterceptHull out;
  out.hull.ubar.assign(n, 0.0);
  out.hull.ulow.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double intercept = r.sigma[j] / r.C(j, i);
      out.hull.ubar[i] = std::max(out.hull.ubar[i], intercept);
      out.hull.ulow[i] = std::min(out.hull.ulow[i], intercept);
    }
    if (out.hull.ubar[i] == out.hull.ulow[i]) out.degenerate.push_back(i);
  }
  return out;
}

/// One sampled region of hypothesis [H].
struct RegionCheck {
  bool pass = true;
  std::size_t samples = 0;
  double worst_value = 0.0;  // most adverse f_i value found (signed)
  std::size_t worst_species = 0;
  Vector worst_point;
};

struct HypothesisReport {
  RegionCheck lower;  // f_i >= -tol on sum u_i/ulow_i <= 1
  RegionCheck upper;  // f_i <= +tol on sum u_i/ubar_i >= 1 (sampled up to 2*ubar)

  bool pass() const { return lower.pass && upper.pass; }
};

namespace detail {
inline constexpr double kMaxLatticePoints = 2.0e7;
}

/// Sampled verification of hypothesis [H] for Lotka-Volterra kinetics.
///
/// The lower region is covered by the full barycentric lattice (face and
/// interior) scaled by ulow. The upper region is covered by the face
/// sum u_i/ubar_i = 1 and its radial dilations t in [1, 2], each on a lattice
/// of `samples_per_face` divisions.
inline HypothesisReport verify_hypothesis_H(const SystemSpec& spec, const HullBounds& hull,
                                            std::size_t samples_per_face) {
  validate(spec);
  validate(hull);
  const std::size_t n = spec.n;
  detail::require_length(hull.ubar, n, "ubar");
  if (samples_per_face == 0) throw UsageError("samples_per_face must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(hull.ubar[i] > hull.ulow[i])) {
      throw DomainError("hypothesis [H] unverifiable: degenerate hull on axis " +
                        std::to_string(i) + " (ubar == ulow)");
    }
  }
  const double lower_points = simplex_lattice_size(n, samples_per_face, true);
  const double upper_points =
      simplex_lattice_size(n, samples_per_face, false) * static_cast<double>(samples_per_face + 1);
  if (lower_points + upper_points > detail::kMaxLatticePoints) {
    throw UsageError("sampling lattice too large; lower samples_per_face");
  }

  HypothesisReport report;
  report.lower.worst_value = std::numeric_limits<double>::infinity();
  report.upper.worst_value = -std::numeric_limits<double>::infinity();
  Vector u(n);

  for_each_simplex_point(n, samples_per_face, true, [&](std::span<const double> s) {
    for (std::size_t i = 0; i < n; ++i) u[i] = s[i] * hull.ulow[i];
    const Vector f = reaction_eval(spec.reaction, u);
    ++report.lower.samples;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] < report.lower.worst_value) {
        report.lower.worst_value = f[i];
        report.lower.worst_species = i;
        report.lower.worst_point = u;
      }
    }
  });
  report.lower.pass = report.lower.worst_value >= -kHypothesisTolerance;

  const double inv = 1.0 / static_cast<double>(samples_per_face);
  for_each_simplex_point(n, samples_per_face, false, [&](std::span<const double> s) {
    for (std::size_t step = 0; step <= samples_per_face; ++step) {
      const double t = 1.0 + static_cast<double>(step) * inv;
      for (std::size_t i = 0; i < n; ++i) u[i] = t * s[i] * hull.ubar[i];
      const Vector f = reaction_eval(spec.reaction, u);
      ++report.upper.samples;
      for (std::size_t i = 0; i < n; ++i) {
        if (f[i] > report.upper.worst_value) {
          report.upper.worst_value = f[i];
          report.upper.worst_species = i;
          report.upper.worst_point = u;
        }
      }
    }
  });
  report.upper.pass = report.upper.worst_value <= kHypothesisTolerance;
  return report;
}

/// u_i^{l_i} f_i(u) = 0 for every i, up to kRegionTolerance relative to the
/// size of the terms involved.
inline bool is_equilibrium(const SystemSpec& spec, std::span<const double> u) {
  validate(spec);
  detail::require_length(u, spec.n, "equilibrium");
  if (!std::all_of(u.begin(), u.end(), [](double x) { return x >= 0.0; })) return false;
  const Vector f = reaction_eval(spec.reaction, u);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double prefactor = std::pow(u[i], spec.l[i]);
    double scale = spec.reaction.sigma[i];
    for (std::size_t j = 0; j < spec.n; ++j) scale += spec.reaction.C(i, j) * u[j];
    if (std::abs(prefactor * f[i]) > kRegionTolerance * std::max(1.0, prefactor * scale)) {
      return false;
    }
  }
  return true;
}

/// Builds an Equilibrium after checking membership in the equilibrium set.
inline Equilibrium make_equilibrium(const SystemSpec& spec, Vector u) {
  detail::require_domain(is_equilibrium(spec, u), "state is not an equilibrium of the system");
  return Equilibrium{std::move(u)};
}

inline bool is_zero_state(const Equilibrium& e) {
  return std::all_of(e.u.begin(), e.u.end(),
                     [](double x) { return std::abs(x) <= kZeroStateTolerance; });
}

/// 0 when either end state is the origin (only the trivial lower bound
/// survives), 1 otherwise.
inline int chi(const Equilibrium& e_minus, const Equilibrium& e_plus) {
  return (is_zero_state(e_minus) || is_zero_state(e_plus)) ? 0 : 1;
}

}  // namespace nbmp
