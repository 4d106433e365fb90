#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "nbmp/barrier.hpp"
#include "nbmp/bounds.hpp"
#include "nbmp/errors.hpp"
#include "nbmp/exact.hpp"
#include "nbmp/model.hpp"
#include "nbmp/nonexistence.hpp"
#include "nbmp/waves.hpp"

namespace nbmp {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// text helpers
// ---------------------------------------------------------------------------

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Parses a JSON document; syntax errors become UsageError with line and column.
inline json parse_json(std::string_view text, const std::string& source = "input") {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw UsageError(source + ": malformed JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + e.what());
  }
}

namespace detail {

inline const json& require_key(const json& j, const char* key) {
  if (!j.is_object()) throw UsageError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw UsageError(std::string("missing key '") + key + "'");
  return *it;
}

inline double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw UsageError("field '" + field + "' must be a number");
  return j.get<double>();
}

inline Vector as_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw UsageError("field '" + field + "' must be an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return v;
}

/// Square matrix given as nested rows or as a flat row-major array.
inline Matrix as_matrix(const json& j, std::size_t n, const std::string& field) {
  if (!j.is_array()) throw UsageError("field '" + field + "' must be an array");
  if (!j.empty() && j.front().is_array()) {
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
      rows.push_back(as_vector(j[i], field + "[" + std::to_string(i) + "]"));
    }
    require_shape(rows.size() == n, field + " has " + std::to_string(rows.size()) +
                                        " rows, expected " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      require_shape(rows[i].size() == n, field + " row " + std::to_string(i) + " has length " +
                                             std::to_string(rows[i].size()) + ", expected " +
                                             std::to_string(n));
    }
    return Matrix::from_rows(rows);
  }
  const Vector flat = as_vector(j, field);
  require_shape(flat.size() == n * n, field + " has " + std::to_string(flat.size()) +
                                          " entries, expected " + std::to_string(n * n));
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) m(i, k) = flat[i * n + k];
  return m;
}

inline json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(Vector(r.begin(), r.end()));
  }
  return rows;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SystemSpec: {n, m, d, l, theta, sigma, C}. n is inferred from sigma when
// absent; m defaults to 1, l to all ones, theta to 0.
// ---------------------------------------------------------------------------

inline json to_json(const SystemSpec& s) {
  return json{{"n", s.n},
              {"m", s.m},
              {"d", s.d},
              {"l", s.l},
              {"theta", s.theta},
              {"sigma", s.reaction.sigma},
              {"C", detail::matrix_rows(s.reaction.C)}};
}

inline SystemSpec system_spec_from_json(const json& j) {
  SystemSpec s;
  s.reaction.sigma = detail::as_vector(detail::require_key(j, "sigma"), "sigma");
  s.n = s.reaction.sigma.size();
  if (j.contains("n")) {
    const json& n = j["n"];
    if (!n.is_number_integer() || n.get<long long>() < 1) {
      throw UsageError("field 'n' must be a positive integer");
    }
    detail::require_shape(static_cast<std::size_t>(n.get<long long>()) == s.n,
                          "sigma has length " + std::to_string(s.n) + ", expected n = " +
                              std::to_string(n.get<long long>()));
  }
  s.m = j.contains("m") ? detail::as_number(j["m"], "m") : 1.0;
  s.d = detail::as_vector(detail::require_key(j, "d"), "d");
  s.l = j.contains("l") ? detail::as_vector(j["l"], "l") : Vector(s.n, 1.0);
  s.theta = j.contains("theta") ? detail::as_number(j["theta"], "theta") : 0.0;
  s.reaction.C = detail::as_matrix(detail::require_key(j, "C"), s.n, "C");
  validate(s);
  return s;
}

inline json to_json(const HullBounds& h) { return json{{"ubar", h.ubar}, {"ulow", h.ulow}}; }

inline json to_json(const RegionCheck& r) {
  return json{{"pass", r.pass},
              {"samples", r.samples},
              {"worst_value", r.worst_value},
              {"worst_species", r.worst_species},
              {"worst_point", r.worst_point}};
}

inline json to_json(const HypothesisReport& r) {
  return json{{"pass", r.pass()}, {"lower", to_json(r.lower)}, {"upper", to_json(r.upper)}};
}

// ---------------------------------------------------------------------------
// bounds / barrier
// ---------------------------------------------------------------------------

inline json to_json(const BoundsResult& b) {
  return json{{"lower", b.lower}, {"upper", b.upper}, {"chi", b.chi}, {"branch", to_string(b.branch)}};
}

inline BoundsResult bounds_result_from_json(const json& j) {
  BoundsResult b;
  b.lower = detail::as_number(detail::require_key(j, "lower"), "lower");
  b.upper = detail::as_number(detail::require_key(j, "upper"), "upper");
  const json& chi = detail::require_key(j, "chi");
  if (!chi.is_number_integer()) throw UsageError("field 'chi' must be 0 or 1");
  b.chi = chi.get<int>();
  detail::require_chi(b.chi);
  const json& branch = detail::require_key(j, "branch");
  if (!branch.is_string()) throw UsageError("field 'branch' must be a string");
  const auto name = branch.get<std::string>();
  if (name == "m1") b.branch = BoundsBranch::m1;
  else if (name == "general") b.branch = BoundsBranch::general;
  else if (name == "two_species_m2") b.branch = BoundsBranch::two_species_m2;
  else throw UsageError("unknown bounds branch '" + name + "'");
  return b;
}

inline json to_json(const BarrierEnvelope& e) {
  return json{{"lambda1", e.lambda1},
              {"eta1", e.eta1},
              {"lambda2", e.lambda2},
              {"eta2", e.eta2},
              {"orientation", to_string(e.orientation)},
              {"alpha", e.alpha},
              {"m", e.m},
              {"d", e.d},
              {"first_tangent", e.first_tangent},
              {"second_tangent", e.second_tangent}};
}

inline BarrierEnvelope barrier_envelope_from_json(const json& j) {
  BarrierEnvelope e;
  e.lambda1 = detail::as_number(detail::require_key(j, "lambda1"), "lambda1");
  e.eta1 = detail::as_number(detail::require_key(j, "eta1"), "eta1");
  e.lambda2 = detail::as_number(detail::require_key(j, "lambda2"), "lambda2");
  e.eta2 = detail::as_number(detail::require_key(j, "eta2"), "eta2");
  const json& o = detail::require_key(j, "orientation");
  if (!o.is_string()) throw UsageError("field 'orientation' must be a string");
  if (o == "lower") e.orientation = Orientation::lower;
  else if (o == "upper") e.orientation = Orientation::upper;
  else throw UsageError("orientation must be 'lower' or 'upper'");
  if (j.contains("alpha")) e.alpha = detail::as_vector(j["alpha"], "alpha");
  if (j.contains("m")) e.m = detail::as_number(j["m"], "m");
  if (j.contains("d")) e.d = detail::as_vector(j["d"], "d");
  if (j.contains("first_tangent")) e.first_tangent = detail::as_vector(j["first_tangent"], "first_tangent");
  if (j.contains("second_tangent")) e.second_tangent = detail::as_vector(j["second_tangent"], "second_tangent");
  return e;
}

inline json to_json(const ContainmentReport& r) {
  json links = json::array();
  for (const auto& l : r.links) {
    links.push_back(json{{"name", l.name},
                         {"pass", l.pass()},
                         {"analytic_pass", l.analytic_pass},
                         {"sampled_pass", l.sampled_pass},
                         {"analytic_margin", l.analytic_margin},
                         {"worst_margin", l.worst_margin},
                         {"samples", l.samples}});
  }
  return json{{"orientation", to_string(r.orientation)}, {"pass", r.pass()}, {"links", links}};
}

// ---------------------------------------------------------------------------
// exact families
// ---------------------------------------------------------------------------

inline json to_json(const TanhSolution<double>& s) {
  return json{{"family", "tanh"}, {"d1", s.d1},         {"d2", s.d2},         {"c11", s.c11},
              {"c22", s.c22},     {"k1", s.k1},         {"k2", s.k2},         {"sigma1", s.sigma1},
              {"sigma2", s.sigma2}, {"c12", s.c12},     {"c21", s.c21},       {"theta", s.theta}};
}

inline TanhSolution<double> tanh_solution_from_json(const json& j) {
  auto num = [&](const char* k) { return detail::as_number(detail::require_key(j, k), k); };
  return TanhSolution<double>{num("d1"), num("d2"), num("c11"), num("c22"), num("k1"), num("k2"),
                              num("sigma1"), num("sigma2"), num("c12"), num("c21"), num("theta")};
}

inline json to_json(const CosSolution<double>& s) {
  json C = json::array();
  for (const auto& row : s.C) C.push_back(std::vector<double>(row.begin(), row.end()));
  return json{{"family", "cos"},
              {"m", std::vector<double>(s.m.begin(), s.m.end())},
              {"mu", s.mu},
              {"d", std::vector<double>(s.d.begin(), s.d.end())},
              {"C", C},
              {"k", std::vector<double>(s.k.begin(), s.k.end())},
              {"sigma", std::vector<double>(s.sigma.begin(), s.sigma.end())},
              {"theta", s.theta}};
}

namespace detail {
inline std::array<double, 3> as_triple(const json& j, const std::string& field) {
  const Vector v = as_vector(j, field);
  require_shape(v.size() == 3, field + " must have 3 entries");
  return {v[0], v[1], v[2]};
}
}  // namespace detail

inline CosSolution<double> cos_solution_from_json(const json& j) {
  CosSolution<double> s;
  s.m = detail::as_triple(detail::require_key(j, "m"), "m");
  s.mu = detail::as_number(detail::require_key(j, "mu"), "mu");
  s.d = detail::as_triple(detail::require_key(j, "d"), "d");
  const Matrix C = detail::as_matrix(detail::require_key(j, "C"), 3, "C");
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) s.C[i][k] = C(i, k);
  s.k = detail::as_triple(detail::require_key(j, "k"), "k");
  s.sigma = detail::as_triple(detail::require_key(j, "sigma"), "sigma");
  s.theta = detail::as_number(detail::require_key(j, "theta"), "theta");
  return s;
}

inline json to_json(const ResidualReport& r) {
  return json{{"max_abs", r.max_abs}, {"at_x", r.at_x}, {"overall", r.overall()}};
}

// ---------------------------------------------------------------------------
// waves
// ---------------------------------------------------------------------------

inline json to_json(const BoundsCheck& c) {
  json v = json::array();
  for (const auto& b : c.violations) {
    v.push_back(json{{"x", b.x}, {"p", b.p}, {"side", b.above ? "above" : "below"}});
  }
  return json{{"pass", c.pass()},   {"min_p", c.min_p}, {"x_min", c.x_min},
              {"max_p", c.max_p},   {"x_max", c.x_max}, {"violation_count", c.violations.size()},
              {"violations", v}};
}

/// Extrema and flags of a trajectory (the CSV carries the samples).
inline json trajectory_summary(const Trajectory& t) {
  json out{{"points", t.size()}, {"clamped", t.clamped}, {"truncated", t.truncated}};
  if (t.truncated) out["reason"] = t.reason;
  if (t.size() > 0) {
    out["x_start"] = t.xs.front();
    out["x_end"] = t.xs.back();
    out["p_min"] = *std::min_element(t.p.begin(), t.p.end());
    out["p_max"] = *std::max_element(t.p.begin(), t.p.end());
    out["q_min"] = *std::min_element(t.q.begin(), t.q.end());
    out["q_max"] = *std::max_element(t.q.begin(), t.q.end());
    out["u_end"] = t.u.back();
    out["w_end"] = t.w.back();
  }
  return out;
}

// ---------------------------------------------------------------------------
// nonexistence: {d, sigma, C, w_minus_inf?, w_plus_inf?, H0?, H1?, H4?}
// ---------------------------------------------------------------------------

inline ThreeSpeciesParams three_species_from_json(const json& j) {
  ThreeSpeciesParams p;
  p.d = detail::as_triple(detail::require_key(j, "d"), "d");
  p.sigma = detail::as_triple(detail::require_key(j, "sigma"), "sigma");
  const Matrix C = detail::as_matrix(detail::require_key(j, "C"), 3, "C");
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) p.C[i][k] = C(i, k);
  for (const char* key : {"w_minus_inf", "w_plus_inf"}) {
    if (j.contains(key) && !j[key].is_null()) {
      const double w = detail::as_number(j[key], key);
      (std::string(key) == "w_minus_inf" ? p.w_minus_inf : p.w_plus_inf) = w;
    }
  }
  validate(p);
  return p;
}

inline ProfileAssumptions assumptions_from_json(const json& j) {
  ProfileAssumptions a;
  auto flag = [&](const char* key, bool& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) throw UsageError(std::string("field '") + key + "' must be a boolean");
    out = j[key].get<bool>();
  };
  flag("H0", a.H0);
  flag("H1", a.H1);
  flag("H4", a.H4);
  return a;
}

inline json to_json(const NonexistenceVerdict& v) {
  const auto& a = v.case_i;
  const auto& b = v.case_ii;
  return json{{"case_i",
               {{"applicable", a.applicable},
                {"phi1", a.phi1},
                {"phi2", a.phi2},
                {"ulow_star", a.ulow_star},
                {"vlow_star", a.vlow_star},
                {"lambda_star", a.lambda_star},
                {"blocked", a.blocked},
                {"assumed", {{"H0", a.H0_asserted}, {"H1", a.H1_asserted}}}}},
              {"case_ii",
               {{"applicable", b.applicable},
                {"ubar_star", b.ubar_star},
                {"vbar_star", b.vbar_star},
                {"lambda_star_upper", b.lambda_star_upper},
                {"threshold", b.threshold},
                {"conclusive", b.conclusive},
                {"blocked", b.blocked},
                {"assumed", {{"H4", b.H4_asserted}}}}}};
}

inline NonexistenceVerdict nonexistence_verdict_from_json(const json& j) {
  NonexistenceVerdict v;
  const json& a = detail::require_key(j, "case_i");
  const json& b = detail::require_key(j, "case_ii");
  auto boolean = [](const json& o, const char* k) {
    const json& x = detail::require_key(o, k);
    if (!x.is_boolean()) throw UsageError(std::string("field '") + k + "' must be a boolean");
    return x.get<bool>();
  };
  auto num = [](const json& o, const char* k) { return detail::as_number(detail::require_key(o, k), k); };
  v.case_i.applicable = boolean(a, "applicable");
  v.case_i.phi1 = num(a, "phi1");
  v.case_i.phi2 = num(a, "phi2");
  v.case_i.ulow_star = num(a, "ulow_star");
  v.case_i.vlow_star = num(a, "vlow_star");
  v.case_i.lambda_star = num(a, "lambda_star");
  v.case_i.blocked = boolean(a, "blocked");
  if (a.contains("assumed")) {
    v.case_i.H0_asserted = boolean(a["assumed"], "H0");
    v.case_i.H1_asserted = boolean(a["assumed"], "H1");
  }
  v.case_ii.applicable = boolean(b, "applicable");
  v.case_ii.ubar_star = num(b, "ubar_star");
  v.case_ii.vbar_star = num(b, "vbar_star");
  v.case_ii.lambda_star_upper = num(b, "lambda_star_upper");
  v.case_ii.threshold = num(b, "threshold");
  v.case_ii.conclusive = boolean(b, "conclusive");
  v.case_ii.blocked = boolean(b, "blocked");
  if (b.contains("assumed")) v.case_ii.H4_asserted = boolean(b["assumed"], "H4");
  return v;
}

}  // namespace nbmp
