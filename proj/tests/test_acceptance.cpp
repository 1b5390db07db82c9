// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// values printed so failures are auditable. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "convin/extract.hpp"
#include "convin/fixtures.hpp"
#include "convin/inner.hpp"
#include "convin/sdp.hpp"
#include "convin/stability.hpp"
#include "convin/trajopt.hpp"

using namespace convin;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void note(const std::string& text) {
  std::printf("       %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double poly_dist(const Polynomial& p, const Polynomial& q) {
  double d = 0.0;
  Polynomial r = p - q;
  for (const auto& [m, c] : r.terms()) d = std::max(d, std::abs(c));
  return d;
}

// Distance of the x-part of a minimizer to the closest of the targets.
double closest_target(const std::vector<double>& x,
                      const std::vector<std::vector<double>>& targets) {
  double best = 1e30;
  for (const auto& t : targets) {
    double d = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
      d = std::max(d, std::abs(x[i] - t[i]));
    best = std::min(best, d);
  }
  return best;
}

// Worst constraint violation of a point against a PolyOptProblem.
double feasibility_error(const PolyOptProblem& prob,
                         const std::vector<double>& x) {
  double e = 0.0;
  for (const auto& p : prob.eqs) e = std::max(e, std::abs(p.eval(x)));
  for (const auto& p : prob.ineqs) e = std::max(e, p.eval(x));
  return e;
}

bool raster_subset(const RegionRaster& inner, const RegionRaster& outer) {
  for (std::size_t i = 0; i < inner.mask.size(); ++i)
    if (inner.mask[i] && !outer.mask[i]) return false;
  return true;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

int main() {
  CertifyOptions base;
  base.max_order = 4;

  // ---- Criterion 1: egg quartic curvature certified 2.0 at order 3. ----
  auto egg = egg_set();
  CertifiedOptimum egg_res;
  {
    CertifyOptions opts = base;
    opts.max_order = 3;
    egg_res = certify(build_curvature_problem(egg, 0), opts);
    bool ok = egg_res.status == RelaxationStatus::certified &&
              std::abs(egg_res.bound - 2.0) <= 1e-3;
    report(1, ok,
           fmt("egg quartic: status %s, bound %.6f at order %d (target "
               "certified 2.0000 +- 1e-3)",
               egg_res.status == RelaxationStatus::certified ? "certified"
                                                             : "not certified",
               egg_res.bound, egg_res.order_used));
  }

  // ---- Criterion 2: hyperbola bound, minimizers, and slab cuts. ----
  auto hyp = hyperbola_set();
  CertifiedOptimum hyp_res;
  InnerResult hyp_inner;
  {
    CertifyOptions opts = base;
    opts.max_order = 3;
    hyp_res = certify(build_curvature_problem(hyp, 0), opts);
    bool bound_ok = hyp_res.status == RelaxationStatus::certified &&
                    std::abs(hyp_res.bound + 1.0) <= 1e-3;

    double worst_min = 1e30;
    for (const auto& m : hyp_res.minimizers)
      worst_min = std::max(worst_min == 1e30 ? 0.0 : worst_min,
                           closest_target({m[0], m[1]},
                                          {{1.0, 1.0}, {-1.0, -1.0}}));
    bool min_ok = !hyp_res.minimizers.empty() && worst_min <= 1e-3;

    InnerOptions io;
    io.eps = 0.0;
    io.certify.max_order = 3;
    hyp_inner = inner_approximation(hyp, io);
    Polynomial up(2), dn(2);
    up.add_term(Monomial({1, 0}), 1.0);
    up.add_term(Monomial({0, 1}), 1.0);
    up.add_term(Monomial({0, 0}), -2.0);
    dn.add_term(Monomial({1, 0}), -1.0);
    dn.add_term(Monomial({0, 1}), -1.0);
    dn.add_term(Monomial({0, 0}), -2.0);
    double du = 1e30, dd = 1e30;
    for (const auto& c : hyp_inner.cuts) {
      Polynomial scaled = c.scaled(std::sqrt(2.0));  // cuts are unit-gradient
      du = std::min(du, poly_dist(scaled, up));
      dd = std::min(dd, poly_dist(scaled, dn));
    }
    bool cuts_ok = hyp_inner.cuts.size() == 2 && du <= 1e-6 && dd <= 1e-6;

    report(2, bound_ok && min_ok && cuts_ok,
           fmt("hyperbola: bound %.6f (target -1 +- 1e-3), minimizer "
               "deviation %.2e from +-(1,1), cut deviations %.2e / %.2e "
               "from -2 <= x1+x2 <= 2",
               hyp_res.bound, worst_min, du, dd));
    note("the minimizer targets are +-(1,1): the quoted +-(sqrt2/2,sqrt2/2) "
         "does not lie on x1*x2 = 1 and is inconsistent with the required "
         "slab cuts, which are the supporting halfspaces at +-(1,1)");
  }

  // ---- Criterion 3: waterdrop bound, minimizers, re-certification. ----
  auto water = waterdrop_set();
  InnerResult water_e0, water_e3;
  {
    InnerOptions io;
    io.eps = 0.0;
    io.certify.max_order = 4;
    water_e0 = inner_approximation(water, io);
    io.eps = 1e-3;
    water_e3 = inner_approximation(water, io);

    const CurvatureCheck& first = water_e0.log.front();
    bool bound_ok = first.status == RelaxationStatus::certified &&
                    std::abs(first.bound + 0.094159) <= 1e-3;
    double worst_min = 1e30;
    for (const auto& m : first.minimizers)
      worst_min =
          std::max(worst_min == 1e30 ? 0.0 : worst_min,
                   closest_target(m, {{0.04889, -0.14076},
                                      {-0.04889, -0.14076}}));
    bool min_ok = !first.minimizers.empty() && worst_min <= 1e-3;

    const CurvatureCheck& recert = water_e0.log.back();
    bool recert_ok = recert.status == RelaxationStatus::certified &&
                     std::abs(recert.bound - 1.0) <= 1e-2;

    report(3, bound_ok && min_ok && recert_ok,
           fmt("waterdrop: bound %.6f at order %d (target -0.094159 +- "
               "1e-3), minimizer deviation %.2e, re-certified curvature "
               "after two cuts %.6f (target 1 +- 1e-2)",
               first.bound, first.order_used, worst_min, recert.bound));
    if (!recert_ok) {
      note("re-certification cannot reach 1 with zero-margin cuts: the cuts "
           "are tangent at the minimizers, so both minimizers remain "
           "feasible and the re-solve returns the same -0.094159");
      note(fmt("with a 1e-3 cut margin the sliver at the neck is removed "
               "and order 4 certifies %.5f; the exact minimum curvature of "
               "the cut region is 1.2136 (attained where the cuts re-enter "
               "the boundary), so the target value 1 is not attained by "
               "either variant",
               water_e3.log.back().bound));
    }
  }

  // ---- Criterion 4: singular quartic bounds and perturbations. ----
  CertifiedOptimum sing_res;
  {
    CertifyOptions opts = base;
    opts.max_order = 5;
    sing_res = certify(build_curvature_problem(singular_set(0.0), 0), opts);
    const double refs[4] = {-0.75, -0.077502, -0.0085855, -0.0049525};
    bool all_bound_only = sing_res.status == RelaxationStatus::bound_only;
    bool bounds_ok = sing_res.log.size() >= 4;
    std::string bounds_txt;
    for (std::size_t i = 0; i < sing_res.log.size() && i < 4; ++i) {
      double b = sing_res.log[i].bound;
      bool in = std::abs(b - refs[i]) <= 0.10 * std::abs(refs[i]);
      bounds_ok = bounds_ok && in;
      bounds_txt += fmt("k=%d: %.7f (ref %.7f)%s ", sing_res.log[i].order, b,
                        refs[i], in ? "" : " OUT");
    }

    CertifyOptions popts = base;
    popts.max_order = 5;
    auto plus = certify(build_curvature_problem(singular_set(1e-3), 0), popts);
    auto minus =
        certify(build_curvature_problem(singular_set(-1e-3), 0), popts);
    bool plus_ok = plus.status == RelaxationStatus::certified &&
                   plus.bound >= -1e-5 && plus.bound <= 1e-3;
    bool minus_ok = minus.status == RelaxationStatus::certified &&
                    std::abs(minus.bound + 0.22313) <= 1e-3;

    report(4, all_bound_only && bounds_ok && plus_ok && minus_ok,
           fmt("singular quartic: status %s, %s| +1e-3 shift certified "
               "%.2e, -1e-3 shift certified %.6f",
               all_bound_only ? "bound_only" : "unexpected",
               bounds_txt.c_str(), plus.bound, minus.bound));
    if (!bounds_ok) {
      note("orders 4 and 5 report the dual certificate value of the jammed "
           "solve (-0.0020 / -0.0022); both certificates are PSD and "
           "equality-feasible to 1e-8, so they are valid lower bounds for "
           "the relaxations and contradict the quoted -0.0085855 and "
           "-0.0049525, which lie below them");
    }
  }

  // ---- Criterion 5: schur3 saddle certification and halfspace. ----
  auto schur3 = schur3_region();
  CertifiedOptimum s3_res;
  {
    CertifyOptions opts = base;
    opts.max_order = 3;
    s3_res = certify(schur3_saddle_problem(), opts);
    const double target = -(1.0 + std::sqrt(2.0));
    bool bound_ok = s3_res.status == RelaxationStatus::certified &&
                    std::abs(s3_res.bound - target) <= 1e-3;
    double parab = 0.0;
    for (const auto& m : s3_res.minimizers)
      parab = std::max(parab,
                       std::abs(std::sqrt(2.0) * m[0] * m[0] - m[1] + 1.0));
    bool min_ok = !s3_res.minimizers.empty() && parab <= 1e-5;

    auto h = separating_halfspace(schur3.set.ineqs[2], {0.0, 1.0, 0.0}, 0.0);
    Polynomial target_h(3);
    target_h.add_term(Monomial({0, 1, 0}), 1.0);
    target_h.add_term(Monomial({0, 0, 0}), -1.0);
    double hd = std::min(poly_dist(h, target_h),
                         poly_dist(h.scaled(-1.0), target_h));
    bool half_ok = hd <= 1e-9;

    report(5, bound_ok && min_ok && half_ok,
           fmt("schur3: bound %.6f (target %.6f +- 1e-3), max parabola "
               "residual %.2e over %zu minimizers, halfspace deviation "
               "%.2e from x2 - 1",
               s3_res.bound, target, parab, s3_res.minimizers.size(), hd));
  }

  // ---- Criterion 6: schur4 a=0 certification and analytic center. ----
  auto s4a0 = schur4_region(0.0);
  CertifiedOptimum s4a0_res;
  {
    int cubic = -1;
    for (std::size_t i = 0; i < s4a0.set.ineqs.size(); ++i)
      if (s4a0.set.ineqs[i].degree() > 1) cubic = static_cast<int>(i);
    CertifyOptions opts = base;
    opts.max_order = 3;
    s4a0_res = certify(build_curvature_problem(s4a0.set, cubic), opts);
    bool neg2 = !s4a0_res.log.empty() && s4a0_res.log[0].order == 2 &&
                s4a0_res.log[0].bound < 0.0;
    bool cert3 = s4a0_res.status == RelaxationStatus::certified &&
                 s4a0_res.bound >= 0.80 && s4a0_res.bound <= 1.00;

    auto center = analytic_center(s4a0.set, {0.5, 0.1});
    bool center_ok = center.converged &&
                     std::abs(center.x_star[0] - 0.57975) <= 1e-3 &&
                     std::abs(center.x_star[1] - 0.13657) <= 1e-3;

    report(6, neg2 && cert3 && center_ok,
           fmt("schur4 a=0: order-2 bound %.5f (< 0), order-3 certified "
               "%.5f (target [0.80, 1.00]), analytic center (%.6f, %.6f) "
               "(target (0.57975, 0.13657) +- 1e-3)",
               s4a0_res.log.empty() ? 0.0 : s4a0_res.log[0].bound,
               s4a0_res.bound, center.x_star[0], center.x_star[1]));
  }

  // ---- Criterion 7: schur4 a=-3/4 bound and verified inner region. ----
  auto s4am = schur4_region(-0.75);
  InnerResult s4am_inner;
  CertifiedOptimum s4am_res;
  {
    int cubic = -1;
    for (std::size_t i = 0; i < s4am.set.ineqs.size(); ++i)
      if (s4am.set.ineqs[i].degree() > 1) cubic = static_cast<int>(i);
    CertifyOptions opts = base;
    s4am_res = certify(build_curvature_problem(s4am.set, cubic), opts);
    // The cubic piece is stored in units scaled down by 64 (integer
    // coefficients 1/64th of the displayed form), so the curvature optimum
    // scales by 64 when converted back.
    const double external = 64.0 * s4am_res.bound;
    bool bound_ok = s4am_res.status == RelaxationStatus::certified &&
                    s4am_res.order_used <= 4 &&
                    std::abs(external + 380.87) <= 0.5;

    InnerOptions io;
    io.certify.max_order = 4;
    s4am_inner = inner_approximation(s4am.set, io);
    auto rep = verify_stability_sampling(s4am, s4am_inner.region,
                                         {{{-2.0, 2.0}, {-2.0, 2.0}}},
                                         {200, 200});
    bool sample_ok = rep.checked > 0 && rep.violations == 0;

    report(7, bound_ok && sample_ok,
           fmt("schur4 a=-3/4: certified %.5f at order %d -> %.3f in "
               "display units (target -380.87 +- 0.5); sampling checked "
               "%zu points, %zu violations (target 0)",
               s4am_res.bound, s4am_res.order_used, external, rep.checked,
               rep.violations));
  }

  // ---- Criterion 8: trajectory costs. ----
  {
    bool ok = true;
    double conv100 = 0.0, nonc100 = 0.0;
    std::string times;
    for (int n : {10, 100, 1000}) {
      auto fpn = build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, n,
                                    water);
      auto fpc = build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, n,
                                    water_e3.region);
      TrajOptions nopts;
      nopts.multistart = true;
      auto rn = solve_flat_program(fpn, nopts);
      auto rc = solve_flat_program(fpc, TrajOptions{});
      ok = ok && rn.converged && rc.converged && rc.cost >= rn.cost - 1e-9;
      if (n == 100) {
        conv100 = rc.cost;
        nonc100 = rn.cost;
        ok = ok && rc.cost >= 1.60 && rc.cost <= 1.77;
        ok = ok && rn.cost >= 1.45 && rn.cost <= 1.60;
      }
      times += fmt("N=%d: convex %.3fs / nonconvex %.3fs  ", n, rc.wall_time,
                   rn.wall_time);
    }
    report(8, ok,
           fmt("trajopt N=100: convex cost %.5f (target [1.60, 1.77]), "
               "nonconvex cost %.5f (target [1.45, 1.60]); convex >= "
               "nonconvex for N in {10, 100, 1000}",
               conv100, nonc100));
    note("wall times (reported, not asserted): " + times);
  }

  // ---- Criterion 9: property suites. ----
  {
    // (a) formal derivatives vs central differences, 200 random polys.
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_int_distribution<int> dim(1, 3), deg(0, 4), nterms(1, 6);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
      int n = dim(rng);
      Polynomial p(n);
      int k = nterms(rng);
      for (int t = 0; t < k; ++t) {
        std::vector<int> e(n, 0);
        int d = deg(rng);
        for (int rep = 0; rep < d; ++rep) ++e[dim(rng) % n];
        p.add_term(Monomial(e), coef(rng));
      }
      std::vector<double> x(n);
      for (auto& xi : x) xi = coef(rng) * 0.5;
      const double h = 1e-5;
      for (int j = 0; j < n; ++j) {
        auto xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        double num = (p.eval(xp) - p.eval(xm)) / (2 * h);
        double ana = p.diff(j).eval(x);
        if (std::abs(num - ana) > 1e-6 * (1.0 + std::abs(ana))) ++bad;
        for (int l = 0; l < n; ++l) {
          double hnum = (p.diff(l).eval(xp) - p.diff(l).eval(xm)) / (2 * h);
          double hana = p.diff(l).diff(j).eval(x);
          if (std::abs(hnum - hana) > 1e-6 * (1.0 + std::abs(hana))) ++bad;
        }
      }
    }
    bool a_ok = bad == 0;

    // (b) independent KKT residuals on fixture relaxations that report
    // optimal.
    int kkt_checked = 0, kkt_bad = 0;
    double worst_eq = 0.0, worst_comp = 0.0;
    std::vector<PolyOptProblem> fixture_probs = {
        build_curvature_problem(egg, 0), build_curvature_problem(hyp, 0),
        build_curvature_problem(water, 0), schur3_saddle_problem(),
        build_curvature_problem(singular_set(0.0), 0)};
    for (const auto& prob : fixture_probs) {
      int kmin = min_relaxation_order(prob);
      for (int k = kmin; k <= kmin + 1; ++k) {
        auto sdp = build_relaxation(prob, k);
        auto sol = solve_sdp(sdp);
        if (sol.status != SdpStatus::optimal) continue;
        auto kkt = verify_kkt(sdp, sol);
        ++kkt_checked;
        worst_eq = std::max(worst_eq, kkt.eq_residual_inf);
        worst_comp =
            std::max(worst_comp, kkt.complementarity / kkt.scale);
        if (kkt.eq_residual_inf > 1e-6 ||
            kkt.complementarity > 1e-6 * kkt.scale)
          ++kkt_bad;
      }
    }
    bool b_ok = kkt_checked >= 6 && kkt_bad == 0;

    // (c) 400^2 raster subset check on the 2D fixtures.
    InnerOptions io_egg;
    io_egg.certify.max_order = 3;
    auto egg_inner = inner_approximation(egg, io_egg);
    struct SubsetCase {
      const char* name;
      const SemialgebraicSet* outer;
      const SemialgebraicSet* inner;
      std::vector<std::array<double, 2>> bbox;
    };
    std::vector<SubsetCase> cases = {
        {"egg", &egg, &egg_inner.region, {{-1.5, 1.5}, {-1.5, 1.5}}},
        {"waterdrop", &water, &water_e3.region, {{-1.5, 1.5}, {-1.5, 1.5}}},
        {"hyperbola", &hyp, &hyp_inner.region, {{-3.0, 3.0}, {-3.0, 3.0}}},
        {"schur4 a=0", &s4a0.set, &s4a0.set, {{-2.0, 2.0}, {-2.0, 2.0}}},
        {"schur4 a=-3/4",
         &s4am.set,
         &s4am_inner.region,
         {{-2.0, 2.0}, {-2.0, 2.0}}}};
    bool c_ok = true;
    for (const auto& cs : cases) {
      auto ro = rasterize(*cs.outer, cs.bbox, {400, 400});
      auto ri = rasterize(*cs.inner, cs.bbox, {400, 400});
      if (!raster_subset(ri, ro)) {
        c_ok = false;
        note(fmt("subset violation on fixture %s", cs.name));
      }
    }

    // (d) convex invariance of the egg quartic.
    bool d_ok = egg_inner.convex_certified && egg_inner.cuts.empty() &&
                egg_inner.region.ineqs.size() == egg.ineqs.size();
    for (std::size_t i = 0; d_ok && i < egg.ineqs.size(); ++i)
      d_ok = poly_dist(egg_inner.region.ineqs[i], egg.ineqs[i]) == 0.0;

    // (e) certified minimizers re-verify feasible with objective equal to
    // the bound.
    bool e_ok = true;
    struct CertCase {
      const char* name;
      PolyOptProblem prob;
      const CertifiedOptimum* res;
    };
    std::vector<CertCase> certs;
    certs.push_back({"egg", build_curvature_problem(egg, 0), &egg_res});
    certs.push_back({"hyperbola", build_curvature_problem(hyp, 0), &hyp_res});
    certs.push_back({"schur3", schur3_saddle_problem(), &s3_res});
    for (const auto& cc : certs) {
      if (cc.res->status != RelaxationStatus::certified) continue;
      for (const auto& m : cc.res->minimizers) {
        double fe = feasibility_error(cc.prob, m);
        double oe = std::abs(cc.prob.objective.eval(m) - cc.res->bound);
        if (fe > 1e-6 || oe > 1e-5) {
          e_ok = false;
          note(fmt("minimizer soundness violation on %s: feasibility %.2e, "
                   "objective gap %.2e",
                   cc.name, fe, oe));
        }
      }
    }

    // (f) bound monotonicity across hierarchy orders.
    bool f_ok = true;
    std::vector<std::pair<const char*, const CertifiedOptimum*>> runs = {
        {"egg", &egg_res},       {"hyperbola", &hyp_res},
        {"singular", &sing_res}, {"schur3", &s3_res},
        {"schur4 a=0", &s4a0_res}};
    for (const auto& [name, res] : runs) {
      for (std::size_t i = 0; i + 1 < res->log.size(); ++i) {
        bool rough = res->log[i].sdp_status != SdpStatus::optimal ||
                     res->log[i + 1].sdp_status != SdpStatus::optimal;
        // Certificate values from unconverged solves understate the true
        // relaxation optimum by the remaining duality gap, so those pairs
        // get the solver's acceptance tolerance as slack.
        double slack = rough ? 5e-4 : 1e-6;
        if (res->log[i + 1].bound < res->log[i].bound - slack) {
          f_ok = false;
          note(fmt("monotonicity violation on %s between orders %d and %d: "
                   "%.7f -> %.7f",
                   name, res->log[i].order, res->log[i + 1].order,
                   res->log[i].bound, res->log[i + 1].bound));
        }
      }
    }

    bool ok = a_ok && b_ok && c_ok && d_ok && e_ok && f_ok;
    report(9, ok,
           fmt("properties: derivatives %s (%d mismatches), KKT %s (%d "
               "relaxations, worst eq %.1e, worst scaled gap %.1e), raster "
               "subset %s, convex invariance %s, minimizer soundness %s, "
               "bound monotonicity %s",
               a_ok ? "ok" : "FAIL", bad, b_ok ? "ok" : "FAIL", kkt_checked,
               worst_eq, worst_comp, c_ok ? "ok" : "FAIL",
               d_ok ? "ok" : "FAIL", e_ok ? "ok" : "FAIL",
               f_ok ? "ok" : "FAIL"));
  }

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
