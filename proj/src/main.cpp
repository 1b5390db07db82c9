#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "convin/extract.hpp"
#include "convin/fixtures.hpp"
#include "convin/inner.hpp"
#include "convin/serialize.hpp"
#include "convin/stability.hpp"
#include "convin/trajopt.hpp"

namespace {

using convin::SemialgebraicSet;
using nlohmann::json;

constexpr const char* kToolVersion = "convin 1.0.0";

// Resolves --set: a built-in fixture name, otherwise a JSON file path.
SemialgebraicSet resolve_set(const std::string& name, double a) {
  try {
    return convin::named_set(name, a);
  } catch (const std::invalid_argument&) {
    return convin::set_from_json(convin::load_json(name));
  }
}

json make_manifest(const std::string& subcommand, const json& options,
                   unsigned seed, double wall_time) {
  return {{"subcommand", subcommand},
          {"options", options},
          {"seed", seed},
          {"tool_version", kToolVersion},
          {"wall_time", wall_time}};
}

double env_sdp_tol() {
  if (const char* v = std::getenv("CONVIN_SDP_TOL")) return std::atof(v);
  return 1e-8;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

int run_certify(const std::string& set_name, double a, int piece,
                int max_order) {
  auto S = resolve_set(set_name, a);
  if (piece < 1 || piece > static_cast<int>(S.ineqs.size())) {
    std::cerr << "piece index out of range (1.." << S.ineqs.size() << ")\n";
    return 2;
  }
  auto prob = convin::build_curvature_problem(S, piece - 1);
  convin::CertifyOptions opts;
  opts.max_order = max_order;
  opts.sdp.tol = env_sdp_tol();
  Timer timer;
  auto result = convin::certify(prob, opts);
  for (const auto& log : result.log)
    std::cout << convin::order_log_to_json(log).dump() << "\n";
  json out = convin::certified_to_json(result);
  out["manifest"] = make_manifest(
      "certify",
      {{"set", set_name}, {"a", a}, {"piece", piece}, {"max_order", max_order}},
      opts.rng_seed, timer.seconds());
  std::cout << out.dump() << "\n";
  return 0;
}

int run_inner(const std::string& set_name, double a, double eps,
              const std::string& policy, int max_order,
              const std::string& out_path, const std::string& log_path,
              const std::string& plot_path) {
  auto S = resolve_set(set_name, a);
  convin::InnerOptions opts;
  opts.eps = eps;
  opts.certify.max_order = max_order;
  opts.certify.sdp.tol = env_sdp_tol();
  if (policy == "all")
    opts.policy = convin::CutPolicy::all_minimizers;
  else if (policy == "first")
    opts.policy = convin::CutPolicy::first_minimizer;
  else if (policy == "maxgrad")
    opts.policy = convin::CutPolicy::max_gradient_norm;
  else {
    std::cerr << "unknown cut policy: " << policy << "\n";
    return 2;
  }
  Timer timer;
  auto res = convin::inner_approximation(S, opts);
  json summary = convin::inner_result_to_json(res);
  summary["manifest"] = make_manifest("inner",
                                      {{"set", set_name},
                                       {"a", a},
                                       {"eps", eps},
                                       {"policy", policy},
                                       {"max_order", max_order}},
                                      opts.certify.rng_seed, timer.seconds());
  if (!out_path.empty()) convin::save_json(out_path, convin::set_to_json(res.region));
  if (!log_path.empty()) convin::save_json(log_path, summary);
  if (!plot_path.empty()) {
    if (S.n != 2) {
      std::cerr << "--plot requires a 2D set\n";
      return 2;
    }
    std::vector<std::array<double, 2>> bbox = {{-1.5, 1.5}, {-1.5, 1.5}};
    auto outer = convin::rasterize(S, bbox, {400, 400});
    auto inner = convin::rasterize(res.region, bbox, {400, 400});
    std::ofstream svg(plot_path);
    if (!svg) {
      std::cerr << "cannot write " << plot_path << "\n";
      return 2;
    }
    svg << convin::raster_svg(outer, &inner);
  }
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_stab(const std::string& kind, double a, bool want_center,
             bool want_inner, const std::string& plot_path) {
  convin::StabilityRegionSpec spec;
  if (kind == "schur3")
    spec = convin::schur3_region();
  else if (kind == "schur4")
    spec = convin::schur4_region(a);
  else {
    std::cerr << "unknown stability kind: " << kind << "\n";
    return 2;
  }
  Timer timer;
  json out;
  out["kind"] = kind;
  out["a"] = a;
  out["set"] = convin::set_to_json(spec.set);
  SemialgebraicSet region = spec.set;
  if (want_inner) {
    convin::InnerOptions opts;
    opts.eps = 1e-6;
    opts.certify.max_order = 4;
    opts.certify.sdp.tol = env_sdp_tol();
    auto res = convin::inner_approximation(spec.set, opts);
    region = res.region;
    out["inner"] = convin::inner_result_to_json(res);
  }
  if (want_center) {
    std::vector<double> x0;
    if (kind == "schur3")
      x0 = {0.0, 0.0, 0.0};
    else
      x0 = {0.5, 0.1};
    auto c = convin::analytic_center(region, x0);
    out["center"] = {{"x_star", c.x_star},
                     {"gradient_norm", c.gradient_norm},
                     {"iterations", c.iterations},
                     {"converged", c.converged}};
  }
  if (kind == "schur4") {
    auto rep = convin::verify_stability_sampling(
        spec, region, {{{-2.0, 2.0}, {-2.0, 2.0}}}, {200, 200});
    out["sampling"] = {{"checked", rep.checked},
                       {"violations", rep.violations},
                       {"marginal", rep.marginal},
                       {"violating_points", rep.violating_points}};
  }
  if (!plot_path.empty()) {
    if (spec.set.n != 2) {
      std::cerr << "--plot requires a 2D region (schur4)\n";
      return 2;
    }
    std::vector<std::array<double, 2>> bbox = {{-2.0, 2.0}, {-2.0, 2.0}};
    auto outer = convin::rasterize(spec.set, bbox, {400, 400});
    auto inner = convin::rasterize(region, bbox, {400, 400});
    std::ofstream svg(plot_path);
    if (!svg) {
      std::cerr << "cannot write " << plot_path << "\n";
      return 2;
    }
    svg << convin::raster_svg(outer, want_inner ? &inner : nullptr);
  }
  out["manifest"] = make_manifest("stab",
                                  {{"kind", kind},
                                   {"a", a},
                                   {"center", want_center},
                                   {"inner", want_inner}},
                                  0, timer.seconds());
  std::cout << out.dump() << "\n";
  return 0;
}

int run_trajopt(const std::string& set_name, int n, unsigned seed,
                const std::string& csv_path) {
  SemialgebraicSet S;
  bool convexified = false;
  if (set_name == "waterdrop") {
    S = convin::waterdrop_set();
  } else if (set_name == "waterdrop-inner") {
    convin::InnerOptions opts;
    opts.eps = 1e-3;
    opts.certify.max_order = 4;
    opts.certify.sdp.tol = env_sdp_tol();
    auto res = convin::inner_approximation(convin::waterdrop_set(), opts);
    S = res.region;
    convexified = true;
  } else {
    S = resolve_set(set_name, 0.0);
  }
  auto fp = convin::build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, n, S);
  convin::TrajOptions opts;
  opts.multistart = !convexified;
  opts.seed = seed;
  Timer timer;
  auto res = convin::solve_flat_program(fp, opts);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) {
      std::cerr << "cannot write " << csv_path << "\n";
      return 2;
    }
    csv << convin::trajectory_csv(fp, res.alpha, 10 * n);
  }
  json out = {{"cost", res.cost},
              {"max_violation", res.max_violation},
              {"iterations", res.iterations},
              {"solve_time", res.wall_time},
              {"converged", res.converged}};
  out["manifest"] = make_manifest(
      "trajopt", {{"set", set_name}, {"n", n}, {"csv", csv_path}}, seed,
      timer.seconds());
  std::cout << out.dump() << "\n";
  return res.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex inner approximations of semialgebraic sets"};
  app.require_subcommand(1);

  std::string set_name, policy = "all", out_path, log_path, plot_path,
              csv_path, kind = "schur4";
  double a = 0.0, eps = 1e-6;
  int piece = 1, max_order = 5, n = 100;
  unsigned seed = 0;
  bool want_center = false, want_inner = false;

  auto* certify = app.add_subcommand("certify", "Boundary curvature certification");
  certify->add_option("--set", set_name, "fixture name or set JSON path")->required();
  certify->add_option("--a", a, "schur4 plant parameter");
  certify->add_option("--piece", piece, "1-based inequality index");
  certify->add_option("--max-order", max_order, "largest relaxation order");

  auto* inner = app.add_subcommand("inner", "Convex inner approximation");
  inner->add_option("--set", set_name, "fixture name or set JSON path")->required();
  inner->add_option("--a", a, "schur4 plant parameter");
  inner->add_option("--eps", eps, "cut margin");
  inner->add_option("--policy", policy, "all|first|maxgrad");
  inner->add_option("--max-order", max_order, "largest relaxation order");
  inner->add_option("--out", out_path, "write the region JSON here");
  inner->add_option("--log", log_path, "write the full log JSON here");
  inner->add_option("--plot", plot_path, "write an SVG raster here");

  auto* stab = app.add_subcommand("stab", "Stability-region workflows");
  stab->add_option("--kind", kind, "schur3|schur4")->required();
  stab->add_option("--a", a, "schur4 plant parameter");
  stab->add_flag("--center", want_center, "report the analytic center");
  stab->add_flag("--inner", want_inner, "convexify the region first");
  stab->add_option("--plot", plot_path, "write an SVG raster here");

  auto* trajopt = app.add_subcommand("trajopt", "Flat-output trajectory demo");
  trajopt->add_option("--set", set_name, "waterdrop|waterdrop-inner|JSON path")->required();
  trajopt->add_option("--n", n, "number of constraint instants");
  trajopt->add_option("--seed", seed, "multistart seed");
  trajopt->add_option("--csv", csv_path, "write the trajectory CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return run_certify(set_name, a, piece, max_order);
    if (inner->parsed())
      return run_inner(set_name, a, eps, policy, max_order, out_path,
                       log_path, plot_path);
    if (stab->parsed()) return run_stab(kind, a, want_center, want_inner, plot_path);
    if (trajopt->parsed()) return run_trajopt(set_name, n, seed, csv_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
