// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "nbmp/nbmp.hpp"
#include "oracles.hpp"

using namespace nbmp;
using oracle::rel_err;
using Q = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                        boost::multiprecision::et_off>;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool envelope_is(const BarrierEnvelope& e, double l1, double h1, double l2, double h2, double tol) {
  return rel_err(e.lambda1, l1) < tol && rel_err(e.eta1, h1) < tol && rel_err(e.lambda2, l2) < tol &&
         rel_err(e.eta2, h2) < tol;
}

void lower_reference(Outcome& o) {
  const Vector d{3, 4}, ulow{1.0 / 3, 0.5};
  const auto t0 = Clock::now();
  const auto a = build_lower_barrier(Vector{1, 2}, d, ulow, 2);
  const auto b = build_lower_barrier(Vector{1, 1}, d, ulow, 2);
  const double elapsed = seconds_since(t0);
  o.require(envelope_is(a, 2.0 / 7, std::sqrt(2.0 / 21), 4.0 / 35, 2 / std::sqrt(105.0), 1e-12), "alpha=(1,2)");
  o.require(envelope_is(b, 0.25, 0.25, 3.0 / 28, std::sqrt(3.0 / 7) / 4, 1e-12), "alpha=(1,1)");
  o.require(elapsed < 1e-3, "runtime");
  o.detail << " runtime=" << elapsed * 1e6 << "us";
}

void upper_reference(Outcome& o) {
  const Vector ones{1, 1};
  o.require(envelope_is(build_upper_barrier(Vector{1, 2}, Vector{3, 4}, ones, 2), 8, 2 * std::sqrt(5.0 / 3), 20,
                        5 * std::sqrt(2.0 / 3), 1e-12), "alpha=(1,2)");
  o.require(envelope_is(build_upper_barrier(Vector{1, 1}, Vector{3, 4}, ones, 2), 4, std::sqrt(7.0 / 3), 28.0 / 3,
                        7.0 / 3, 1e-12), "alpha=(1,1)");
  o.require(envelope_is(build_upper_barrier(Vector{1, 0.5}, Vector{3, 4}, ones, 2), 3, 0.5 * std::sqrt(5.5), 11,
                        11 / (2 * std::sqrt(6.0)), 1e-12), "alpha=(1,1/2)");
  o.require(envelope_is(build_upper_barrier(Vector{1, 0.75}, Vector{3, 2}, ones, 2), 3, 0.5 * std::sqrt(8.5),
                        51.0 / 8, 17.0 / 8, 1e-12), "alpha=(1,3/4),d=(3,2)");
}

void tanh_front_bounds(Outcome& o) {
  const HullBounds hull{{240, 16}, {80, 80.0 / 9}};
  const auto b = bounds_two_species_m2(0.5, 1.0 / 3, 3, 4, hull, 1);
  const auto g = bounds_general(Vector{0.5, 1.0 / 3}, Vector{3, 4}, hull, 2, 1);
  o.require(rel_err(b.lower, 80 / std::sqrt(2211.0)) < 1e-12, "lower");
  o.require(rel_err(b.upper, 180 * std::sqrt(2.0)) < 1e-12, "upper");
  o.require(rel_err(b.lower, g.lower) < 1e-12 && rel_err(b.upper, g.upper) < 1e-12, "general branch");
  o.detail << " lower=" << b.lower << " upper=" << b.upper;
}

void exact_residuals(Outcome& o) {
  const auto t = tanh_family(3.0, 4.0, 1.0, 2.0);
  const double rt = residual(induced_spec(t), tanh_profile(t), uniform_grid({-20, 20, 0.01})).overall();
  o.require(rt < 1e-8, "tanh residual");
  const CosFreeParameters<double> p{{-0.1, 1.0 / 11, 1.0 / 12}, 2.0, {1, 1, 1}, 1067.0 / 60, 1, 175.0 / 11,
                                    6.0 / 11, 15, 11.0 / 12};
  const auto c = cos_family(p);
  const double T = 2 * M_PI / c.mu;
  const double rc = residual(induced_spec(c), cos_profile(c), uniform_grid({0, T, T / 2000})).overall();
  o.require(rc < 1e-8, "cos residual");
  const auto q = cos_family(CosFreeParameters<Q>{{Q(-1) / 10, Q(1) / 11, Q(1) / 12}, Q(2), {Q(1), Q(1), Q(1)},
                                                 Q(1067) / 60, Q(1), Q(175) / 11, Q(6) / 11, Q(15), Q(11) / 12});
  bool exact = true;
  for (int i = 0; i < 3; ++i) exact = exact && q.sigma[i] == Q(1) && q.C[i][i] == Q(1);
  o.require(exact, "rational sigma/c_ii");
  o.detail << " tanh=" << rt << " cos=" << rc;
}

void nbmp_check(Outcome& o) {
  const auto s = tanh_family(3.0, 4.0, 1.0, 2.0);
  const auto spec = induced_spec(s);
  const auto profile = tanh_profile(s);
  const Vector alpha{0.5, 1.0 / 3};
  const auto b = bounds_two_species_m2(0.5, 1.0 / 3, 3, 4, hull_intercepts(spec.reaction).hull, 1);
  o.require(rel_err(b.lower, 80 / std::sqrt(2211.0)) < 1e-12 && rel_err(b.upper, 180 * std::sqrt(2.0)) < 1e-12,
            "bounds");

  const auto analytic = sample_profile(spec, profile, uniform_grid({-30, 30, 1e-3}), alpha);
  const auto ca = check_bounds(analytic, alpha, b);
  o.require(ca.pass(), "analytic violations");
  o.require(std::abs(analytic.p.back() - 16.0 / 3) < 1e-6, "p(+30)");
  o.require(std::abs(analytic.p.front() - 120) < 1e-6, "p(-30)");

  const auto j = profile(-1.0);
  const Vector w0{2 * j.u[0] * j.du[0], 2 * j.u[1] * j.du[1]};
  const auto rk = integrate(spec, j.u, w0, GridSpec{-1, 1, 1e-3}, alpha);
  o.require(!rk.truncated, "rk4 truncated");
  const auto cr = check_bounds(rk, alpha, b);
  o.require(cr.pass(), "rk4 violations");
  o.detail << " analytic p in [" << ca.min_p << ", " << ca.max_p << "], rk4 p in [" << cr.min_p << ", "
           << cr.max_p << "] on [-1,1]";
}

void tangency_oracle(Outcome& o) {
  oracle::Rng rng(6);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const double a1 = rng.uniform(0.2, 3), a2 = rng.uniform(0.2, 3), d1 = rng.uniform(0.2, 3),
                 d2 = rng.uniform(0.2, 3), l1 = rng.uniform(0.2, 3), l2 = rng.uniform(0.2, 3),
                 Th = rng.uniform(0.2, 3);
    const double w = tangency_weighted(Th, Vector{a1, a2}, Vector{d1, d2}, Vector{l1, l2}, 2).Lambda;
    const double p = tangency_plain(Th, Vector{a1, a2}, Vector{d1, d2}, 2).Lambda;
    worst = std::max(worst, rel_err(w, oracle::min_energy_on_plane(Th, a1, a2, d1, d2, l1, l2, 2)));
    worst = std::max(worst, rel_err(p, oracle::min_energy_on_plane(Th, a1, a2, d1, d2, 1 / a1, 1 / a2, 2)));
  }
  o.require(worst < 1e-6, "brute force mismatch");
  o.detail << " worst_rel=" << worst;
}

void containment_suite(Outcome& o) {
  oracle::Rng rng(7);
  const double ms[] = {1.5, 2, 3};
  int failures = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 3));
    const double m = ms[rng.integer(0, 2)];
    const Vector a = rng.vector(n, 0.1, 4), d = rng.vector(n, 0.1, 4), ul = rng.vector(n, 0.1, 4);
    Vector ub(n);
    for (std::size_t i = 0; i < n; ++i) ub[i] = ul[i] * rng.uniform(1, 4);
    const HullBounds hull{ub, ul};
    const auto lo = build_lower_barrier(a, d, ul, m);
    const auto up = build_upper_barrier(a, d, ub, m);
    const auto rl = verify_containment(lo, hull, 100, Orientation::lower);
    const auto ru = verify_containment(up, hull, 100, Orientation::upper);
    const bool ok = rl.pass() && ru.pass() && rl.links.size() == 4 && ru.links.size() == 4 &&
                    lo.eta2 <= lo.eta1 && lo.lambda2 <= lo.lambda1 && up.eta2 >= up.eta1 &&
                    up.lambda2 >= up.lambda1;
    if (!ok) ++failures;
  }
  o.require(failures == 0, std::to_string(failures) + " failing inputs");
}

void convergence(Outcome& o) {
  const auto t0 = Clock::now();
  const auto s = tanh_family(3.0, 4.0, 1.0, 2.0);
  const auto spec = induced_spec(s);
  const auto profile = tanh_profile(s);
  const auto j = profile(-1.0);
  const Vector w0{2 * j.u[0] * j.du[0], 2 * j.u[1] * j.du[1]};
  double errs[3];
  const double steps[3] = {4e-3, 2e-3, 1e-3};
  for (int k = 0; k < 3; ++k) {
    const auto t = integrate(spec, j.u, w0, GridSpec{-1, 1, steps[k]});
    double e = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto ex = profile(t.xs[i]);
      for (int c = 0; c < 2; ++c) e = std::max(e, std::abs(t.u[i][c] - ex.u[c]));
    }
    errs[k] = t.truncated ? INFINITY : e;
  }
  const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
  const double elapsed = seconds_since(t0);
  o.require(r1 >= 12 && r1 <= 20, "ratio 4e-3/2e-3");
  o.require(r2 >= 12 && r2 <= 20, "ratio 2e-3/1e-3");
  o.require(elapsed < 5, "runtime");
  o.detail << " errors=" << errs[0] << "," << errs[1] << "," << errs[2] << " ratios=" << r1 << "," << r2
           << " runtime=" << elapsed << "s";
}

void nonexistence_criteria(Outcome& o) {
  oracle::Rng rng(9);
  double worst = 0;
  int applicable = 0;
  for (int k = 0; k < 20; ++k) {
    ThreeSpeciesParams p;
    for (int i = 0; i < 3; ++i) {
      p.d[i] = rng.uniform(0.2, 3);
      p.sigma[i] = rng.uniform(0.5, 3);
      for (int c = 0; c < 3; ++c) p.C[i][c] = rng.uniform(0.1, 3);
    }
    p.sigma[2] = rng.uniform(0.01, 0.5);
    p.w_minus_inf = rng.uniform(0, 0.5);
    const auto v1 = check_case_i(p);
    if (v1.applicable) {
      ++applicable;
      const HullBounds h{{v1.ulow_star, v1.vlow_star}, {v1.ulow_star, v1.vlow_star}};
      worst = std::max(worst, rel_err(v1.lambda_star,
                                      bounds_two_species_m2(p.C[2][0], p.C[2][1], p.d[0], p.d[1], h, 1).lower));
    }
    const auto v2 = check_case_ii(p);
    const HullBounds h{{v2.ubar_star, v2.vbar_star}, {v2.ubar_star, v2.vbar_star}};
    worst = std::max(worst, rel_err(v2.lambda_star_upper,
                                    bounds_two_species_m2(p.C[2][0], p.C[2][1], p.d[0], p.d[1], h, 1).upper));

    bool prev_i = true, prev_ii = false;
    for (int s = 0; s <= 400; ++s) {
      p.sigma[2] = 0.001 + 0.05 * s;
      const auto v = check_nonexistence(p);
      o.require(prev_i || !v.case_i.blocked, "case i not monotone");
      o.require(!prev_ii || v.case_ii.blocked, "case ii not monotone");
      prev_i = v.case_i.blocked;
      prev_ii = v.case_ii.blocked;
    }
  }
  o.require(worst < 1e-12, "formula mismatch");
  o.require(applicable > 0, "no applicable case i sample");
  o.detail << " worst_rel=" << worst << " case_i_applicable=" << applicable << "/20";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"1 lower N-barrier reference values", lower_reference},
      {"2 upper N-barrier reference values", upper_reference},
      {"3 two-species m=2 bound values", tanh_front_bounds},
      {"4 exact-solution residuals", exact_residuals},
      {"5 bounds along tanh front", nbmp_check},
      {"6 tangency vs brute force", tangency_oracle},
      {"7 containment property suite", containment_suite},
      {"8 RK4 fourth-order convergence", convergence},
      {"9 nonexistence criteria", nonexistence_criteria},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("%s criterion %s:%s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
