#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convin/semialg.hpp"

using namespace convin;

namespace {

// Unit disk {x1^2 + x2^2 - 1 <= 0}.
SemialgebraicSet unit_disk() {
  Polynomial p(2);
  p.add_term(Monomial({2, 0}), 1.0);
  p.add_term(Monomial({0, 2}), 1.0);
  p.add_term(Monomial({0, 0}), -1.0);
  SemialgebraicSet S;
  S.n = 2;
  S.ineqs.push_back(p);
  return S;
}

}  // namespace

TEST_CASE("membership on the unit disk") {
  auto S = unit_disk();
  CHECK(membership(S, {0.0, 0.0}));
  CHECK(membership(S, {1.0, 0.0}));
  CHECK_FALSE(membership(S, {1.0, 1.0}));
  CHECK_FALSE(membership(S, {1.0 + 1e-9, 0.0}));
  CHECK(membership(S, {1.0 + 1e-9, 0.0}, 1e-6));
}

TEST_CASE("ball polynomial") {
  auto S = unit_disk();
  CHECK_FALSE(S.ball_polynomial().has_value());
  S.ball_radius = 10.0;
  auto b = S.ball_polynomial();
  REQUIRE(b.has_value());
  CHECK(b->eval({10.0, 0.0}) == doctest::Approx(0.0));
  CHECK(b->eval({0.0, 0.0}) == doctest::Approx(-100.0));
}

TEST_CASE("raster of the unit disk approximates its area") {
  auto S = unit_disk();
  std::vector<std::array<double, 2>> bbox{{-1.2, 1.2}, {-1.2, 1.2}};
  auto r = rasterize(S, bbox, {201, 201});
  CHECK(r.cells() == 201u * 201u);
  std::size_t inside = 0;
  for (auto v : r.mask) inside += v;
  double cell = (2.4 / 200) * (2.4 / 200);
  double area = inside * cell;
  CHECK(area == doctest::Approx(M_PI).epsilon(0.02));
}

TEST_CASE("raster grid points and indexing round-trip") {
  auto S = unit_disk();
  std::vector<std::array<double, 2>> bbox{{0.0, 1.0}, {-1.0, 1.0}};
  auto r = rasterize(S, bbox, {3, 5});
  auto p = r.gridpoint({2, 0});
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(-1.0));
  CHECK(r.mask[r.index({0, 2})] == 1);  // (0, 0) is inside
  CHECK(r.mask[r.index({2, 4})] == 0);  // (1, 1) is outside
}

TEST_CASE("3d raster of a ball") {
  Polynomial p(3);
  p.add_term(Monomial({2, 0, 0}), 1.0);
  p.add_term(Monomial({0, 2, 0}), 1.0);
  p.add_term(Monomial({0, 0, 2}), 1.0);
  p.add_term(Monomial({0, 0, 0}), -1.0);
  SemialgebraicSet S;
  S.n = 3;
  S.ineqs.push_back(p);
  std::vector<std::array<double, 2>> bbox{{-1, 1}, {-1, 1}, {-1, 1}};
  auto r = rasterize(S, bbox, {21, 21, 21});
  std::size_t inside = 0;
  for (auto v : r.mask) inside += v;
  double vol = inside * std::pow(2.0 / 20, 3);
  CHECK(vol == doctest::Approx(4.0 * M_PI / 3.0).epsilon(0.05));
}

TEST_CASE("csv output has one row per cell plus header") {
  auto S = unit_disk();
  auto r = rasterize(S, {{-1, 1}, {-1, 1}}, {4, 4});
  auto csv = raster_csv(r);
  std::size_t rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 17);  // header + 16 cells
  CHECK(csv.substr(0, csv.find('\n')) == "x1,x2,inside");
}

TEST_CASE("svg output embeds both layers") {
  auto S = unit_disk();
  auto outer = rasterize(S, {{-1, 1}, {-1, 1}}, {16, 16});
  SemialgebraicSet small = S;
  Polynomial shrink(2);
  shrink.add_term(Monomial({2, 0}), 1.0);
  shrink.add_term(Monomial({0, 2}), 1.0);
  shrink.add_term(Monomial({0, 0}), -0.25);
  small.ineqs[0] = shrink;
  auto inner = rasterize(small, {{-1, 1}, {-1, 1}}, {16, 16});
  auto svg = raster_svg(outer, &inner);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("#cccccc") != std::string::npos);
  CHECK(svg.find("#555555") != std::string::npos);
  CHECK(raster_svg(outer).find("#555555") == std::string::npos);
}
