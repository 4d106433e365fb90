#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nbmp/barrier.hpp"
#include "nbmp/bounds.hpp"
#include "nbmp/errors.hpp"
#include "nbmp/exact.hpp"
#include "nbmp/grid.hpp"
#include "nbmp/io.hpp"
#include "nbmp/model.hpp"
#include "nbmp/nonexistence.hpp"
#include "nbmp/waves.hpp"

namespace nbmp::cli {

/// Exit statuses.
enum Exit : int { ok = 0, domain_error = 1, usage_error = 2, check_failed = 3 };

namespace detail {

/// Inline JSON if the argument starts with '{', otherwise a file path.
inline json load_document(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return parse_json(arg, "inline JSON");
  std::ifstream in(arg);
  if (!in) throw UsageError("cannot open '" + arg + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json(text, arg);
}

/// lo:hi:step
inline GridSpec parse_grid(const std::string& s, const std::string& option) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw UsageError(option + " expects lo:hi:step, got '" + s + "'");
  GridSpec g;
  double* fields[] = {&g.lo, &g.hi, &g.step};
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t used = 0;
    try {
      *fields[i] = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != parts[i].size() || parts[i].empty()) {
      throw UsageError(option + ": '" + parts[i] + "' is not a number");
    }
  }
  grid_intervals(g);
  return g;
}

/// lo:hi
inline std::pair<double, double> parse_span(const std::string& s, const std::string& option) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError(option + " expects lo:hi, got '" + s + "'");
  double lo = 0.0, hi = 0.0;
  try {
    std::size_t a = 0, b = 0;
    lo = std::stod(s.substr(0, colon), &a);
    hi = std::stod(s.substr(colon + 1), &b);
    if (a != colon || b != s.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError(option + ": cannot parse '" + s + "'");
  }
  if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
    throw UsageError(option + " needs lo < hi");
  }
  return {lo, hi};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

inline void emit(const json& doc, const std::string& out_path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

inline std::string csv_row(std::initializer_list<double> head, const std::vector<Vector>& cols) {
  std::string line;
  bool first = true;
  auto put = [&](double v) {
    if (!first) line += ',';
    line += format_double(v);
    first = false;
  };
  for (double v : head) put(v);
  for (const auto& c : cols)
    for (double v : c) put(v);
  return line + "\n";
}

inline std::string profile_csv(const Profile& profile, const std::vector<double>& xs) {
  std::string text = "x";
  for (std::size_t i = 0; i < profile.n; ++i) text += ",u" + std::to_string(i + 1);
  text += "\n";
  for (double x : xs) text += csv_row({x}, {profile(x).u});
  return text;
}

inline std::string trajectory_csv(const Trajectory& t) {
  std::string text = "x";
  for (std::size_t i = 0; i < t.n; ++i) text += ",u" + std::to_string(i + 1);
  for (std::size_t i = 0; i < t.n; ++i) text += ",w" + std::to_string(i + 1);
  text += ",p,q\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    text += csv_row({t.xs[k]}, {t.u[k], t.w[k], Vector{t.p[k], t.q[k]}});
  }
  return text;
}

inline HullBounds hull_for(const SystemSpec& spec, const Vector& ubar, const Vector& ulow) {
  HullBounds hull = hull_intercepts(spec.reaction).hull;
  if (!ubar.empty()) hull.ubar = ubar;
  if (!ulow.empty()) hull.ulow = ulow;
  validate(hull);
  nbmp::detail::require_length(hull.ubar, spec.n, "hull");
  return hull;
}

struct CosOptions {
  Vector m{-1.0 / 10.0, 1.0 / 11.0, 1.0 / 12.0};
  double mu = 2.0;
  Vector d{1.0, 1.0, 1.0};
  double c12 = 1067.0 / 60.0, c13 = 1.0, c21 = 175.0 / 11.0, c23 = 6.0 / 11.0, c31 = 15.0,
         c32 = 11.0 / 12.0;
};

struct TanhOptions {
  double d1 = 3.0, d2 = 4.0, c11 = 1.0, c22 = 2.0;
};

inline void add_tanh_options(CLI::App* app, TanhOptions& o) {
  app->add_option("--d1", o.d1, "diffusion rate of u")->capture_default_str();
  app->add_option("--d2", o.d2, "diffusion rate of v")->capture_default_str();
  app->add_option("--c11", o.c11, "self-competition of u")->capture_default_str();
  app->add_option("--c22", o.c22, "self-competition of v")->capture_default_str();
}

inline void add_cos_options(CLI::App* app, CosOptions& o) {
  app->add_option("--m", o.m, "amplitudes m1,m2,m3")->delimiter(',')->expected(3);
  app->add_option("--mu", o.mu, "wavenumber");
  app->add_option("--d", o.d, "diffusion rates d1,d2,d3")->delimiter(',')->expected(3);
  app->add_option("--c12", o.c12);
  app->add_option("--c13", o.c13);
  app->add_option("--c21", o.c21);
  app->add_option("--c23", o.c23);
  app->add_option("--c31", o.c31);
  app->add_option("--c32", o.c32);
}

inline CosSolution<double> solve_cos(const CosOptions& o) {
  nbmp::detail::require_shape(o.m.size() == 3 && o.d.size() == 3, "cos family needs 3 species");
  CosFreeParameters<double> p{{o.m[0], o.m[1], o.m[2]}, o.mu, {o.d[0], o.d[1], o.d[2]},
                              o.c12, o.c13, o.c21, o.c23, o.c31, o.c32};
  return cos_family(p);
}

inline double cos_period(const CosSolution<double>& s) { return 2.0 * M_PI / std::abs(s.mu); }

/// One period sampled at 2001 points.
inline std::vector<double> period_grid(const CosSolution<double>& s) {
  const double T = cos_period(s);
  return uniform_grid({0.0, T, T / 2000.0});
}

}  // namespace detail

/// Parses `args` (without the program name), runs one subcommand and returns
/// the exit status. JSON goes to `out` unless --out is given; diagnostics go
/// to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"N-barrier maximum principle toolkit", "nbmp"};
  app.require_subcommand(1, 1);
  std::string out_path;
  app.add_option("--out", out_path, "write the JSON result to this file instead of stdout");

  // bounds --------------------------------------------------------------
  std::string spec_arg;
  Vector alpha, ubar, ulow;
  int chi_flag = 1;
  std::string branch = "auto";
  auto* bounds = app.add_subcommand("bounds", "a-priori bounds on sum alpha_i u_i");
  bounds->add_option("spec", spec_arg, "SystemSpec JSON file or inline JSON")->required();
  bounds->add_option("--alpha", alpha, "weights alpha_i")->delimiter(',')->required();
  bounds->add_option("--chi", chi_flag, "0 if an end state is the zero state")->capture_default_str();
  bounds->add_option("--branch", branch, "auto | m1 | general | two_species_m2")
      ->check(CLI::IsMember({"auto", "m1", "general", "two_species_m2"}))
      ->capture_default_str();
  bounds->add_option("--ubar", ubar, "override the upper hull")->delimiter(',');
  bounds->add_option("--ulow", ulow, "override the lower hull")->delimiter(',');

  // barrier -------------------------------------------------------------
  std::string barrier_spec, orientation = "lower", curves_csv;
  Vector barrier_d, barrier_hull;
  double barrier_m = 0.0;
  std::size_t samples = 100;
  bool verify = false;
  auto* barrier = app.add_subcommand("barrier", "build a lower or upper N-barrier");
  barrier->add_option("spec", barrier_spec, "SystemSpec (supplies d, m and the hull)");
  barrier->add_option("--orientation", orientation, "lower | upper")
      ->check(CLI::IsMember({"lower", "upper"}))
      ->capture_default_str();
  barrier->add_option("--alpha", alpha, "weights alpha_i")->delimiter(',')->required();
  barrier->add_option("--d", barrier_d, "diffusion rates (overrides spec)")->delimiter(',');
  barrier->add_option("--m", barrier_m, "diffusion exponent > 1 (overrides spec)");
  barrier->add_option("--hull", barrier_hull, "ulow (lower) or ubar (upper); overrides spec")
      ->delimiter(',');
  barrier->add_option("--samples", samples, "boundary divisions per face")->capture_default_str();
  barrier->add_flag("--verify", verify, "check the containment chain; exit 3 if it fails");
  barrier->add_option("--csv", curves_csv, "write boundary samples (set,u1..un)");

  // verify-h ------------------------------------------------------------
  std::size_t h_samples = 50;
  auto* verify_h = app.add_subcommand("verify-h", "sample hypothesis [H] on the hull regions");
  verify_h->add_option("spec", spec_arg, "SystemSpec JSON")->required();
  verify_h->add_option("--samples", h_samples, "lattice divisions per face")->capture_default_str();
  verify_h->add_option("--ubar", ubar, "override the upper hull")->delimiter(',');
  verify_h->add_option("--ulow", ulow, "override the lower hull")->delimiter(',');

  // exact ---------------------------------------------------------------
  detail::TanhOptions tanh_opts;
  detail::CosOptions cos_opts;
  std::string grid_arg, csv_path;
  auto* exact = app.add_subcommand("exact", "closed-form solution families");
  exact->require_subcommand(1, 1);
  auto* exact_tanh = exact->add_subcommand("tanh", "two-species tanh front");
  detail::add_tanh_options(exact_tanh, tanh_opts);
  auto* exact_cos = exact->add_subcommand("cos", "three-species periodic solution");
  detail::add_cos_options(exact_cos, cos_opts);
  for (auto* sub : {exact_tanh, exact_cos}) {
    sub->add_option("--grid", grid_arg, "lo:hi:step; also writes a CSV of the profile");
    sub->add_option("--csv", csv_path, "CSV path (default exact_<family>.csv)");
  }

  // residual ------------------------------------------------------------
  double tol = 1e-8;
  std::string residual_spec;
  auto* residual_cmd = app.add_subcommand("residual", "residual of a closed-form profile");
  residual_cmd->require_subcommand(1, 1);
  auto* residual_tanh = residual_cmd->add_subcommand("tanh", "tanh front");
  detail::add_tanh_options(residual_tanh, tanh_opts);
  auto* residual_cos = residual_cmd->add_subcommand("cos", "periodic solution");
  detail::add_cos_options(residual_cos, cos_opts);
  for (auto* sub : {residual_tanh, residual_cos}) {
    sub->add_option("--grid", grid_arg, "lo:hi:step (default -20:20:0.01 / one period)");
    sub->add_option("--spec", residual_spec, "evaluate against this system instead");
    sub->add_option("--tol", tol, "pass threshold on the max residual")->capture_default_str();
  }

  // simulate ------------------------------------------------------------
  Vector u0, w0, bounds_override;
  std::string span_arg;
  double step = 1e-3;
  bool check = false;
  auto* simulate = app.add_subcommand("simulate", "integrate a traveling-wave trajectory");
  simulate->add_option("spec", spec_arg, "SystemSpec JSON")->required();
  simulate->add_option("--u0", u0, "initial u (positive)")->delimiter(',')->required();
  simulate->add_option("--w0", w0, "initial (u^m)'")->delimiter(',')->required();
  simulate->add_option("--span", span_arg, "lo:hi")->required();
  simulate->add_option("--step", step, "RK4 step")->capture_default_str();
  simulate->add_option("--alpha", alpha, "weights for p and q (default all ones)")->delimiter(',');
  simulate->add_option("--csv", csv_path, "write x,u1..un,w1..wn,p,q");
  simulate->add_flag("--check-bounds", check, "compare p with the a-priori bounds; exit 3 on violation");
  simulate->add_option("--chi", chi_flag, "chi for the bounds check")->capture_default_str();
  simulate->add_option("--bounds", bounds_override, "lower,upper instead of the computed bounds")
      ->delimiter(',')
      ->expected(2);

  // nonexistence --------------------------------------------------------
  auto* nonexistence = app.add_subcommand("nonexistence", "three-species wave nonexistence criteria");
  nonexistence->add_option("params", spec_arg, "parameter JSON {d, sigma, C, w_minus_inf?, w_plus_inf?}")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream sink;
    const int code = app.exit(e, out, sink);
    if (code == 0) return Exit::ok;
    err << "usage error: " << e.what() << "\n";
    return Exit::usage_error;
  }

  try {
    if (*bounds) {
      const SystemSpec spec = system_spec_from_json(detail::load_document(spec_arg));
      const HullBounds hull = detail::hull_for(spec, ubar, ulow);
      nbmp::detail::require_length(alpha, spec.n, "alpha");
      BoundsResult r;
      if (branch == "auto") {
        r = bounds_for(spec, alpha, hull, chi_flag);
      } else if (branch == "m1") {
        r = bounds_m1(alpha, spec.d, hull, chi_flag);
      } else if (branch == "general") {
        r = bounds_general(alpha, spec.d, hull, spec.m, chi_flag);
      } else {
        nbmp::detail::require_shape(spec.n == 2, "two_species_m2 needs n = 2");
        nbmp::detail::require_domain(spec.m == 2.0, "two_species_m2 needs m = 2");
        r = bounds_two_species_m2(alpha[0], alpha[1], spec.d[0], spec.d[1], hull, chi_flag);
      }
      json doc = to_json(r);
      doc["alpha"] = alpha;
      doc["hull"] = to_json(hull);
      detail::emit(doc, out_path, out);
      return Exit::ok;
    }

    if (*barrier) {
      Vector d = barrier_d;
      double m = barrier_m;
      Vector axis = barrier_hull;
      HullBounds hull;
      if (!barrier_spec.empty()) {
        const SystemSpec spec = system_spec_from_json(detail::load_document(barrier_spec));
        if (d.empty()) d = spec.d;
        if (m == 0.0) m = spec.m;
        hull = hull_intercepts(spec.reaction).hull;
      }
      if (d.empty() || m == 0.0) throw UsageError("barrier needs a spec or both --d and --m");
      if (!axis.empty()) {
        hull.ubar = axis;
        hull.ulow = axis;
      }
      if (hull.ubar.empty()) throw UsageError("barrier needs a spec or --hull");
      const bool lower = orientation == "lower";
      const Vector& level = lower ? hull.ulow : hull.ubar;
      const BarrierEnvelope env =
          lower ? build_lower_barrier(alpha, d, level, m) : build_upper_barrier(alpha, d, level, m);
      json doc = to_json(env);
      int code = Exit::ok;
      const HullBounds one_sided{level, level};
      if (verify) {
        const ContainmentReport rep = verify_containment(env, one_sided, samples);
        doc["containment"] = to_json(rep);
        if (!rep.pass()) code = Exit::check_failed;
      }
      if (!curves_csv.empty()) {
        std::string text = "set";
        for (std::size_t i = 0; i < alpha.size(); ++i) text += ",u" + std::to_string(i + 1);
        text += "\n";
        for (const auto& pt : barrier_curves(env, one_sided, samples)) {
          text += pt.set;
          for (double v : pt.u) text += "," + format_double(v);
          text += "\n";
        }
        detail::write_text(curves_csv, text);
        doc["csv"] = curves_csv;
      }
      detail::emit(doc, out_path, out);
      return code;
    }

    if (*verify_h) {
      const SystemSpec spec = system_spec_from_json(detail::load_document(spec_arg));
      const HullBounds hull = detail::hull_for(spec, ubar, ulow);
      if (h_samples == 0) throw UsageError("--samples must be positive");
      const HypothesisReport rep = verify_hypothesis_H(spec, hull, h_samples);
      json doc = to_json(rep);
      doc["hull"] = to_json(hull);
      detail::emit(doc, out_path, out);
      return rep.pass() ? Exit::ok : Exit::check_failed;
    }

    if (*exact) {
      json doc;
      Profile profile;
      std::string family;
      if (*exact_tanh) {
        const auto s = tanh_family(tanh_opts.d1, tanh_opts.d2, tanh_opts.c11, tanh_opts.c22);
        const auto c = tanh_coefficients(s);
        doc = to_json(s);
        doc["zeta"] = std::vector<double>(c.zeta.begin(), c.zeta.end());
        doc["xi"] = std::vector<double>(c.xi.begin(), c.xi.end());
        doc["spec"] = to_json(induced_spec(s));
        profile = tanh_profile(s);
        family = "tanh";
      } else {
        const auto s = detail::solve_cos(cos_opts);
        doc = to_json(s);
        const auto c = cos_coefficients(s);
        json coeffs = json::array();
        for (const auto& row : c) coeffs.push_back(std::vector<double>(row.begin(), row.end()));
        doc["coefficients"] = coeffs;
        doc["period"] = detail::cos_period(s);
        doc["spec"] = to_json(induced_spec(s));
        profile = cos_profile(s);
        family = "cos";
      }
      if (!grid_arg.empty()) {
        const auto xs = uniform_grid(detail::parse_grid(grid_arg, "--grid"));
        const std::string path = csv_path.empty() ? "exact_" + family + ".csv" : csv_path;
        detail::write_text(path, detail::profile_csv(profile, xs));
        doc["csv"] = path;
        doc["rows"] = xs.size();
      } else if (!csv_path.empty()) {
        throw UsageError("--csv needs --grid");
      }
      detail::emit(doc, out_path, out);
      return Exit::ok;
    }

    if (*residual_cmd) {
      SystemSpec spec;
      Profile profile;
      std::vector<double> xs;
      if (*residual_tanh) {
        const auto s = tanh_family(tanh_opts.d1, tanh_opts.d2, tanh_opts.c11, tanh_opts.c22);
        spec = induced_spec(s);
        profile = tanh_profile(s);
        xs = uniform_grid(grid_arg.empty() ? GridSpec{-20.0, 20.0, 0.01}
                                           : detail::parse_grid(grid_arg, "--grid"));
      } else {
        const auto s = detail::solve_cos(cos_opts);
        spec = induced_spec(s);
        profile = cos_profile(s);
        xs = grid_arg.empty() ? detail::period_grid(s)
                              : uniform_grid(detail::parse_grid(grid_arg, "--grid"));
      }
      if (!residual_spec.empty()) spec = system_spec_from_json(detail::load_document(residual_spec));
      if (!(tol >= 0.0)) throw UsageError("--tol must be nonnegative");
      const ResidualReport rep = residual(spec, profile, xs);
      json doc = to_json(rep);
      doc["points"] = xs.size();
      doc["tol"] = tol;
      doc["pass"] = rep.overall() < tol;
      detail::emit(doc, out_path, out);
      return rep.overall() < tol ? Exit::ok : Exit::check_failed;
    }

    if (*simulate) {
      const SystemSpec spec = system_spec_from_json(detail::load_document(spec_arg));
      const auto [lo, hi] = detail::parse_span(span_arg, "--span");
      const Trajectory t = integrate(spec, u0, w0, GridSpec{lo, hi, step}, alpha);
      json doc = trajectory_summary(t);
      doc["step"] = step;
      int code = Exit::ok;
      if (check) {
        BoundsResult b;
        if (!bounds_override.empty()) {
          b.lower = bounds_override[0];
          b.upper = bounds_override[1];
          b.chi = chi_flag;
        } else {
          b = bounds_for(spec, t.alpha, hull_intercepts(spec.reaction).hull, chi_flag);
        }
        const BoundsCheck c = check_bounds(t, t.alpha, b);
        doc["bounds"] = to_json(b);
        doc["check"] = to_json(c);
        if (!c.pass()) code = Exit::check_failed;
      }
      if (!csv_path.empty()) {
        detail::write_text(csv_path, detail::trajectory_csv(t));
        doc["csv"] = csv_path;
      }
      detail::emit(doc, out_path, out);
      return code;
    }

    if (*nonexistence) {
      const json doc = detail::load_document(spec_arg);
      const ThreeSpeciesParams p = three_species_from_json(doc);
      const NonexistenceVerdict v = check_nonexistence(p, assumptions_from_json(doc));
      detail::emit(to_json(v), out_path, out);
      return Exit::ok;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return Exit::usage_error;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return Exit::domain_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return Exit::domain_error;
  }
  return Exit::usage_error;
}

}  // namespace nbmp::cli
