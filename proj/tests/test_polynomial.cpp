#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "convin/polynomial.hpp"

using namespace convin;

namespace {

Polynomial random_poly(int n, int deg, std::mt19937& rng) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  Polynomial p(n);
  for (const auto& m : monomials_up_to(n, deg)) p.add_term(m, coef(rng));
  return p;
}

std::vector<double> random_point(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("grlex order: degree first, then lexicographically larger vector") {
  Monomial one({0, 0}), x1({1, 0}), x2({0, 1});
  Monomial x1sq({2, 0}), x1x2({1, 1}), x2sq({0, 2});
  CHECK(grlex_less(one, x1));
  CHECK(grlex_less(x1, x2));
  CHECK(grlex_less(x2, x1sq));
  CHECK(grlex_less(x1sq, x1x2));
  CHECK(grlex_less(x1x2, x2sq));
  CHECK_FALSE(grlex_less(x2sq, x2sq));
  CHECK_FALSE(grlex_less(x1x2, x1sq));
}

TEST_CASE("monomials_up_to is grlex sorted with the binomial count") {
  for (int n : {1, 2, 3}) {
    for (int d : {0, 1, 2, 4}) {
      auto monos = monomials_up_to(n, d);
      CHECK(monos.size() == monomial_count(n, d));
      for (std::size_t i = 1; i < monos.size(); ++i)
        CHECK(grlex_less(monos[i - 1], monos[i]));
    }
  }
  CHECK(monomial_count(2, 3) == 10);
  CHECK(monomial_count(3, 2) == 10);
  CHECK(monomial_count(6, 2) == 28);
}

TEST_CASE("arithmetic matches pointwise evaluation") {
  std::mt19937 rng(7);
  for (int n : {1, 2, 3}) {
    Polynomial p = random_poly(n, 3, rng);
    Polynomial q = random_poly(n, 2, rng);
    for (int t = 0; t < 20; ++t) {
      auto x = random_point(n, rng);
      double pe = p.eval(x), qe = q.eval(x);
      CHECK((p + q).eval(x) == doctest::Approx(pe + qe).epsilon(1e-12));
      CHECK((p - q).eval(x) == doctest::Approx(pe - qe).epsilon(1e-12));
      CHECK((p * q).eval(x) == doctest::Approx(pe * qe).epsilon(1e-10));
      CHECK((-p).eval(x) == doctest::Approx(-pe));
      CHECK(p.scaled(3.5).eval(x) == doctest::Approx(3.5 * pe));
      CHECK(p.plus_constant(2.0).eval(x) == doctest::Approx(pe + 2.0));
    }
  }
}

TEST_CASE("derivatives match central finite differences") {
  std::mt19937 rng(11);
  const double h = 1e-5;
  for (int n : {1, 2, 3}) {
    Polynomial p = random_poly(n, 4, rng);
    auto g = gradient(p);
    REQUIRE(static_cast<int>(g.size()) == n);
    for (int t = 0; t < 10; ++t) {
      auto x = random_point(n, rng);
      for (int j = 0; j < n; ++j) {
        auto xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
        CHECK(g[j].eval(x) == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("hessian is symmetric and matches second differences") {
  std::mt19937 rng(13);
  Polynomial p = random_poly(2, 4, rng);
  auto H = hessian(p);
  CHECK(H[0][1].same_terms(H[1][0]));
  const double h = 1e-4;
  auto x = random_point(2, rng);
  auto shift = [&](int j, int k, double a, double b) {
    auto y = x;
    y[j] += a;
    y[k] += b;
    return p.eval(y);
  };
  double fd01 = (shift(0, 1, h, h) - shift(0, 1, h, -h) - shift(0, 1, -h, h) +
                 shift(0, 1, -h, -h)) /
                (4 * h * h);
  CHECK(H[0][1].eval(x) == doctest::Approx(fd01).epsilon(1e-4));
  double fd00 = (shift(0, 0, h, 0) - 2 * p.eval(x) + shift(0, 0, -h, 0)) /
                (h * h);
  CHECK(H[0][0].eval(x) == doctest::Approx(fd00).epsilon(1e-4));
}

TEST_CASE("diff of a constant and of an absent variable is zero") {
  Polynomial c = Polynomial::constant(2, 4.0);
  CHECK(c.diff(0).is_zero());
  Polynomial x1 = Polynomial::variable(2, 0);
  CHECK(x1.diff(1).is_zero());
  CHECK(x1.diff(0).same_terms(Polynomial::constant(2, 1.0)));
}

TEST_CASE("lifted embeds variables by index shift") {
  // p(x1, x2) = x1 * x2^2 in dimension 4 with offset 2 becomes x3 * x4^2.
  Polynomial p = Polynomial::variable(2, 0) *
                 Polynomial::variable(2, 1) * Polynomial::variable(2, 1);
  Polynomial q = p.lifted(4, 2);
  CHECK(q.dimension() == 4);
  CHECK(q.eval({9.0, 9.0, 2.0, 3.0}) == doctest::Approx(18.0));
}

TEST_CASE("zero coefficients are pruned") {
  Polynomial p(2);
  p.add_term(Monomial({1, 0}), 1.0);
  p.add_term(Monomial({1, 0}), -1.0);
  CHECK(p.is_zero());
  CHECK(p.degree() == 0);
  CHECK((p + p).is_zero());
}

TEST_CASE("degree and coefficient lookup") {
  Polynomial p(2);
  p.add_term(Monomial({3, 1}), 2.0);
  p.add_term(Monomial({0, 0}), -1.0);
  CHECK(p.degree() == 4);
  CHECK(p.coefficient(Monomial({3, 1})) == 2.0);
  CHECK(p.coefficient(Monomial({1, 1})) == 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
  Polynomial p = Polynomial::variable(2, 0);
  Polynomial q = Polynomial::variable(3, 0);
  CHECK_THROWS(p + q);
  CHECK_THROWS(p * q);
}
