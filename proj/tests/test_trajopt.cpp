#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "convin/fixtures.hpp"
#include "convin/trajopt.hpp"

using namespace convin;

TEST_CASE("basis is a partition of unity with zero derivative") {
  auto b = BSplineBasis::clamped_uniform(5, 3, 0.0, 2.5);
  REQUIRE(b.size() == 8);
  std::vector<double> ones(b.size(), 1.0);
  for (double t : {0.0, 0.31, 1.0, 1.999, 2.5}) {
    CHECK(bspline_eval(b, ones, t, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bspline_eval(b, ones, t, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bspline_eval(b, ones, t, 2) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("clamped endpoints depend only on the end coefficients") {
  auto b = BSplineBasis::clamped(3, 0.0, 2.5, {0.1, 0.3, 0.7, 0.9});
  REQUIRE(b.size() == 8);
  std::vector<double> alpha(b.size(), 0.0);
  alpha[0] = 3.5;
  alpha.back() = -2.25;
  CHECK(bspline_eval(b, alpha, 0.0, 0) == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(bspline_eval(b, alpha, 2.5, 0) ==
        doctest::Approx(-2.25).epsilon(1e-12));
  // Interior coefficients do not move the endpoint values.
  for (int k = 1; k + 1 < b.size(); ++k) {
    std::vector<double> e(b.size(), 0.0);
    e[k] = 1.0;
    CHECK(bspline_eval(b, e, 0.0, 0) == doctest::Approx(0.0));
    CHECK(bspline_eval(b, e, 2.5, 0) == doctest::Approx(0.0));
  }
}

TEST_CASE("basis derivatives match central differences") {
  auto b = BSplineBasis::clamped(3, 0.0, 2.5, {0.1, 0.3, 0.7, 0.9});
  const double h = 1e-6;
  for (int k = 0; k < b.size(); ++k) {
    for (double t : {0.4, 1.1, 1.7, 2.2}) {
      double d1 = (b.basis(k, t + h, 0) - b.basis(k, t - h, 0)) / (2 * h);
      double d2 = (b.basis(k, t + h, 1) - b.basis(k, t - h, 1)) / (2 * h);
      CHECK(b.basis(k, t, 1) == doctest::Approx(d1).epsilon(1e-5));
      CHECK(b.basis(k, t, 2) == doctest::Approx(d2).epsilon(1e-5));
    }
  }
}

TEST_CASE("evaluation outside the window throws") {
  auto b = BSplineBasis::clamped_uniform(5, 3, 0.0, 2.5);
  std::vector<double> alpha(b.size(), 1.0);
  CHECK_THROWS(bspline_eval(b, alpha, -0.1, 0));
  CHECK_THROWS(bspline_eval(b, alpha, 2.6, 0));
}

TEST_CASE("infeasible boundary data is rejected") {
  auto S = waterdrop_set();
  CHECK_THROWS(build_flat_program({2.0, 0.0}, {-0.3, -0.8}, 0.0, 2.5, 10, S));
}

TEST_CASE("flat program solve: boundary exactness and feasibility") {
  auto S = waterdrop_set();
  auto fp = build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, 20, S);
  TrajOptions opts;
  opts.multistart = true;
  auto res = solve_flat_program(fp, opts);
  CHECK(res.converged);
  CHECK(res.max_violation <= 0.0);
  CHECK(std::abs(bspline_eval(fp.basis, res.alpha, 0.0, 0) - 0.3) < 1e-8);
  CHECK(std::abs(bspline_eval(fp.basis, res.alpha, 0.0, 1) + 0.8) < 1e-8);
  CHECK(std::abs(bspline_eval(fp.basis, res.alpha, 2.5, 0) + 0.3) < 1e-8);
  CHECK(std::abs(bspline_eval(fp.basis, res.alpha, 2.5, 1) + 0.8) < 1e-8);
}

TEST_CASE("solution stays nearly feasible at a 10x finer check") {
  auto S = waterdrop_set();
  const int N = 20;
  auto fp = build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, N, S);
  TrajOptions opts;
  opts.multistart = true;
  auto res = solve_flat_program(fp, opts);
  REQUIRE(res.converged);
  double worst = -1e9;
  for (int i = 1; i <= 10 * N; ++i) {
    double t = 2.5 * i / (10.0 * N + 1.0);
    std::vector<double> x = {bspline_eval(fp.basis, res.alpha, t, 0),
                             bspline_eval(fp.basis, res.alpha, t, 1)};
    for (const auto& p : S.ineqs) worst = std::max(worst, p.eval(x));
  }
  CHECK(worst < 2e-2);
}

TEST_CASE("dropping path constraints can only lower the cost") {
  auto S = waterdrop_set();
  SemialgebraicSet empty;
  empty.n = 2;
  auto fp = build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, 20, S);
  auto fu = build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, 20, empty);
  TrajOptions opts;
  opts.multistart = true;
  auto rc = solve_flat_program(fp, opts);
  auto ru = solve_flat_program(fu, opts);
  REQUIRE(rc.converged);
  REQUIRE(ru.converged);
  CHECK(ru.cost <= rc.cost + 1e-9);
}

TEST_CASE("csv output has the documented shape") {
  auto S = waterdrop_set();
  auto fp = build_flat_program({0.3, -0.8}, {-0.3, -0.8}, 0.0, 2.5, 10, S);
  TrajOptions opts;
  opts.multistart = true;
  auto res = solve_flat_program(fp, opts);
  auto csv = trajectory_csv(fp, res.alpha, 10);
  // Header plus samples + 1 rows.
  std::size_t rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 12);
  CHECK(csv.rfind("t,x1,x2,u", 0) == 0);
}
