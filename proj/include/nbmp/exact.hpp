#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nbmp/errors.hpp"
#include "nbmp/model.hpp"

namespace nbmp {

// ---------------------------------------------------------------------------
// Tanh front for the two-species Zeldovich-type system
//   d1 (u^2)'' + theta u' + u^2 (sigma1 - c11 u - c12 v) = 0
//   d2 (v^2)'' + theta v' + v^2 (sigma2 - c21 u - c22 v) = 0
// with u = k1 (1 - tanh x)^2, v = k2 (1 + tanh x).
// ---------------------------------------------------------------------------

/// Parameters of the tanh ansatz. Produced by tanh_family, but any values
/// can be fed to tanh_coefficients.
template <typename T>
struct TanhSolution {
  T d1, d2, c11, c22;              // free
  T k1, k2;                        // amplitudes
  T sigma1, sigma2, c12, c21, theta;

  friend bool operator==(const TanhSolution&, const TanhSolution&) = default;
};

/// The one-parameter-per-coefficient family that zeroes every tanh coefficient.
template <typename T>
TanhSolution<T> tanh_family(T d1, T d2, T c11, T c22) {
  const T zero(0);
  detail::require_domain(d1 > zero && d2 > zero && c11 > zero && c22 > zero,
                         "tanh family needs positive d1, d2, c11, c22");
  TanhSolution<T> s{d1, d2, c11, c22, T(0), T(0), T(0), T(0), T(0), T(0), T(0)};
  s.k1 = T(20) * d1 / c11;
  s.k2 = T(4) * d2 / c22;
  s.sigma1 = T(80) * d1;
  s.sigma2 = T(8) * d2;
  s.c12 = T(18) * c22 * d1 / d2;
  s.c21 = T(3) * c11 * d2 / (T(10) * d1);
  s.theta = T(0);
  return s;
}

/// Coefficients of the residuals divided by u (zeta, degree 4 in T = tanh x)
/// and by v (xi, degree 3), lowest power first.
template <typename T>
struct TanhCoefficients {
  std::array<T, 5> zeta;
  std::array<T, 4> xi;
};

template <typename T>
TanhCoefficients<T> tanh_coefficients(const TanhSolution<T>& s) {
  const T& k1 = s.k1;
  const T& k2 = s.k2;
  TanhCoefficients<T> c;
  c.zeta[0] = -s.c11 * k1 * k1 - s.c12 * k1 * k2 + T(12) * s.d1 * k1 - T(2) * s.theta + s.sigma1 * k1;
  c.zeta[1] = T(4) * s.c11 * k1 * k1 + s.c12 * k1 * k2 + T(8) * s.d1 * k1 - T(2) * s.theta -
              T(2) * s.sigma1 * k1;
  c.zeta[2] = -T(6) * s.c11 * k1 * k1 + s.c12 * k1 * k2 - T(32) * s.d1 * k1 + s.sigma1 * k1;
  c.zeta[3] = T(4) * s.c11 * k1 * k1 - s.c12 * k1 * k2 - T(8) * s.d1 * k1;
  c.zeta[4] = T(20) * s.d1 * k1 - s.c11 * k1 * k1;
  c.xi[0] = -s.c22 * k2 * k2 - s.c21 * k1 * k2 + T(2) * s.d2 * k2 + s.theta + s.sigma2 * k2;
  c.xi[1] = -T(2) * s.c22 * k2 * k2 + s.c21 * k1 * k2 - T(6) * s.d2 * k2 - s.theta + s.sigma2 * k2;
  c.xi[2] = -s.c22 * k2 * k2 + s.c21 * k1 * k2 - T(2) * s.d2 * k2;
  c.xi[3] = T(6) * s.d2 * k2 - s.c21 * k1 * k2;
  return c;
}

// ---------------------------------------------------------------------------
// Single-harmonic periodic solution of the three-species system
//   d_i (u_i^2)'' + theta u_i' + u_i (sigma_i - sum_j c_ij u_j) = 0
// with u_i = k_i + m_i cos(mu x).
// ---------------------------------------------------------------------------

/// Free parameters of the cosine family.
template <typename T>
struct CosFreeParameters {
  std::array<T, 3> m;  // amplitudes; the family needs m1 < 0 < m2, m3
  T mu;                // wavenumber
  std::array<T, 3> d;
  T c12, c13, c21, c23, c31, c32;
};

template <typename T>
struct CosSolution {
  std::array<T, 3> m;
  T mu;
  std::array<T, 3> d;
  std::array<std::array<T, 3>, 3> C;
  std::array<T, 3> k;
  std::array<T, 3> sigma;
  T theta;

  friend bool operator==(const CosSolution&, const CosSolution&) = default;
};

namespace detail {
template <typename T>
T abs_value(const T& x) {
  return x < T(0) ? -x : x;
}
}  // namespace detail

/// Solves the 12 coefficient equations for (k_i, sigma_i, c_ii, theta) given
/// the free parameters. Rejects parameter sets whose profile would go
/// negative or whose kinetics would not be positive.
template <typename T>
CosSolution<T> cos_family(const CosFreeParameters<T>& p) {
  const T zero(0);
  for (std::size_t i = 0; i < 3; ++i) {
    detail::require_domain(!(p.m[i] == zero), "cos family needs nonzero amplitudes m_i");
    detail::require_domain(p.d[i] > zero, "cos family needs positive d_i");
  }
  detail::require_domain(!(p.mu == zero), "cos family needs nonzero wavenumber mu");
  detail::require_domain(p.c12 > zero && p.c13 > zero && p.c21 > zero && p.c23 > zero &&
                             p.c31 > zero && p.c32 > zero,
                         "cos family needs positive off-diagonal competition coefficients");

  const T mu2 = p.mu * p.mu;
  const auto& m = p.m;
  CosSolution<T> s;
  s.m = p.m;
  s.mu = p.mu;
  s.d = p.d;
  s.theta = zero;
  s.C = {{{zero, p.c12, p.c13}, {p.c21, zero, p.c23}, {p.c31, p.c32, zero}}};
  s.k = {-m[0], m[1], m[2]};
  s.sigma[0] = T(2) * (p.c12 * m[1] + p.c13 * m[2] + T(3) * p.d[0] * mu2 * m[0]);
  s.sigma[1] = -T(2) * (p.c21 * m[0] + T(3) * p.d[1] * mu2 * m[1]);
  s.sigma[2] = -T(2) * (p.c31 * m[0] + T(3) * p.d[2] * mu2 * m[2]);
  s.C[0][0] = -(p.c12 * m[1] + p.c13 * m[2] + T(4) * p.d[0] * mu2 * m[0]) / m[0];
  s.C[1][1] = -(p.c21 * m[0] + p.c23 * m[2] + T(4) * p.d[1] * mu2 * m[1]) / m[1];
  s.C[2][2] = -(p.c31 * m[0] + p.c32 * m[1] + T(4) * p.d[2] * mu2 * m[2]) / m[2];

  for (std::size_t i = 0; i < 3; ++i) {
    const std::string idx = std::to_string(i + 1);
    if (!(s.k[i] > zero)) throw DomainError("cos family infeasible: k" + idx + " <= 0");
    if (detail::abs_value(m[i]) > s.k[i]) {
      throw DomainError("cos family infeasible: |m" + idx + "| > k" + idx);
    }
    if (!(s.C[i][i] > zero)) throw DomainError("cos family infeasible: c" + idx + idx + " <= 0");
    if (!(s.sigma[i] > zero)) throw DomainError("cos family infeasible: sigma" + idx + " <= 0");
  }
  return s;
}

/// Coefficients of 1, C, C^2 and S (C = cos(mu x), S = sin(mu x)) in each
/// residual. Index [i][0..3].
template <typename T>
std::array<std::array<T, 4>, 3> cos_coefficients(const CosSolution<T>& s) {
  const T mu2 = s.mu * s.mu;
  std::array<std::array<T, 4>, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    T load_k(0);  // sum_j c_ij k_j
    T load_m(0);  // sum_j c_ij m_j
    for (std::size_t j = 0; j < 3; ++j) {
      load_k += s.C[i][j] * s.k[j];
      load_m += s.C[i][j] * s.m[j];
    }
    const T& k = s.k[i];
    const T& m = s.m[i];
    out[i][0] = k * (s.sigma[i] - load_k) + T(2) * s.d[i] * mu2 * m * m;
    out[i][1] = m * (s.sigma[i] - load_k) - k * load_m - T(2) * s.d[i] * k * mu2 * m;
    out[i][2] = -m * load_m - T(4) * s.d[i] * mu2 * m * m;
    out[i][3] = -s.theta * s.mu * m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form profiles and residuals.
// ---------------------------------------------------------------------------

/// Values and first two derivatives of every component at one point.
struct PointJet {
  Vector u;
  Vector du;
  Vector d2u;
};

/// Closed-form profile x -> (u, u', u''); derivatives are analytic.
struct Profile {
  std::size_t n = 0;
  std::function<PointJet(double)> eval;

  PointJet operator()(double x) const { return eval(x); }
};

/// (u^m, (u^m)', (u^m)'') from (u, u', u'') by the chain rule.
struct PowerJet {
  double value;
  double first;
  double second;
};

inline PowerJet power_jet(double u, double du, double d2u, double m) {
  if (m == 1.0) return {u, du, d2u};
  if (m == 2.0) return {u * u, 2.0 * u * du, 2.0 * (du * du + u * d2u)};
  const double um1 = std::pow(u, m - 1.0);
  const double um2 = std::pow(u, m - 2.0);
  return {um1 * u, m * um1 * du, m * (m - 1.0) * um2 * du * du + m * um1 * d2u};
}

inline Profile tanh_profile(const TanhSolution<double>& s) {
  Profile p;
  p.n = 2;
  p.eval = [k1 = s.k1, k2 = s.k2](double x) {
    // 1 - tanh x and 1 + tanh x without cancellation in either tail.
    const double a = 2.0 / (1.0 + std::exp(2.0 * x));
    const double b = 2.0 / (1.0 + std::exp(-2.0 * x));
    const double sech2 = a * b;  // 1 - tanh^2 x
    const double t = std::tanh(x);
    PointJet j;
    j.u = {k1 * a * a, k2 * b};
    j.du = {-2.0 * k1 * a * sech2, k2 * sech2};
    j.d2u = {2.0 * k1 * sech2 * a * (1.0 + 3.0 * t), -2.0 * k2 * t * sech2};
    return j;
  };
  return p;
}

inline Profile cos_profile(const CosSolution<double>& s) {
  Profile p;
  p.n = 3;
  p.eval = [s](double x) {
    const double c = std::cos(s.mu * x);
    const double sn = std::sin(s.mu * x);
    PointJet j;
    j.u.resize(3);
    j.du.resize(3);
    j.d2u.resize(3);
    for (std::size_t i = 0; i < 3; ++i) {
      j.u[i] = s.k[i] + s.m[i] * c;
      j.du[i] = -s.m[i] * s.mu * sn;
      j.d2u[i] = -s.m[i] * s.mu * s.mu * c;
    }
    return j;
  };
  return p;
}

/// System the tanh profile solves: n = 2, m = 2, Zeldovich prefactor l = (2, 2).
inline SystemSpec induced_spec(const TanhSolution<double>& s) {
  SystemSpec spec;
  spec.n = 2;
  spec.m = 2.0;
  spec.d = {s.d1, s.d2};
  spec.l = {2.0, 2.0};
  spec.theta = s.theta;
  spec.reaction.sigma = {s.sigma1, s.sigma2};
  spec.reaction.C = Matrix::from_rows({{s.c11, s.c12}, {s.c21, s.c22}});
  return spec;
}

/// System the cosine profile solves: n = 3, m = 2, l = (1, 1, 1).
inline SystemSpec induced_spec(const CosSolution<double>& s) {
  SystemSpec spec;
  spec.n = 3;
  spec.m = 2.0;
  spec.d = {s.d[0], s.d[1], s.d[2]};
  spec.l = {1.0, 1.0, 1.0};
  spec.theta = s.theta;
  spec.reaction.sigma = {s.sigma[0], s.sigma[1], s.sigma[2]};
  spec.reaction.C = Matrix::from_rows({{s.C[0][0], s.C[0][1], s.C[0][2]},
                                       {s.C[1][0], s.C[1][1], s.C[1][2]},
                                       {s.C[2][0], s.C[2][1], s.C[2][2]}});
  return spec;
}

struct ResidualReport {
  Vector max_abs;  // per equation
  Vector at_x;     // grid point where the maximum occurs

  double overall() const {
    double r = 0.0;
    for (double v : max_abs) r = std::max(r, v);
    return r;
  }
};

/// Pointwise residual d_i (u_i^m)'' + theta u_i' + u_i^{l_i} f_i(u). The terms
/// are large and cancel, so they are summed in extended precision.
inline Vector residual_at(const SystemSpec& spec, const PointJet& jet) {
  using ld = long double;
  const std::size_t n = spec.n;
  detail::require_length(jet.u, n, "profile value");
  Vector r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ld u = jet.u[i], du = jet.du[i], d2u = jet.d2u[i], m = spec.m;
    ld second;
    if (spec.m == 1.0) {
      second = d2u;
    } else if (spec.m == 2.0) {
      second = 2 * (du * du + u * d2u);
    } else {
      second = m * (m - 1) * std::pow(u, m - 2) * du * du + m * std::pow(u, m - 1) * d2u;
    }
    ld f = spec.reaction.sigma[i];
    for (std::size_t j = 0; j < n; ++j) f -= static_cast<ld>(spec.reaction.C(i, j)) * jet.u[j];
    const ld prefactor = spec.l[i] == 1.0 ? u : spec.l[i] == 2.0 ? u * u : std::pow(u, static_cast<ld>(spec.l[i]));
    r[i] = static_cast<double>(static_cast<ld>(spec.d[i]) * second + static_cast<ld>(spec.theta) * du +
                               prefactor * f);
  }
  return r;
}

/// Max absolute residual per equation of `profile` on `grid`.
inline ResidualReport residual(const SystemSpec& spec, const Profile& profile,
                               std::span<const double> grid) {
  validate(spec);
  detail::require_shape(profile.n == spec.n, "profile has " + std::to_string(profile.n) +
                                                 " components, system has " + std::to_string(spec.n));
  if (grid.empty()) throw UsageError("residual grid is empty");
  ResidualReport out;
  out.max_abs.assign(spec.n, 0.0);
  out.at_x.assign(spec.n, grid.front());
  for (double x : grid) {
    const Vector r = residual_at(spec, profile(x));
    for (std::size_t i = 0; i < spec.n; ++i) {
      if (std::abs(r[i]) > out.max_abs[i]) {
        out.max_abs[i] = std::abs(r[i]);
        out.at_x[i] = x;
      }
    }
  }
  return out;
}

}  // namespace nbmp
