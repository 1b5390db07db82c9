#include "convin/fixtures.hpp"

#include <stdexcept>

#include "convin/stability.hpp"

namespace convin {

namespace {

Polynomial quartic(double c40, double c04, double c20, double c03, double c01,
                   double c00) {
  Polynomial p(2);
  if (c40 != 0) p.add_term(Monomial({4, 0}), c40);
  if (c04 != 0) p.add_term(Monomial({0, 4}), c04);
  if (c20 != 0) p.add_term(Monomial({2, 0}), c20);
  if (c03 != 0) p.add_term(Monomial({0, 3}), c03);
  if (c01 != 0) p.add_term(Monomial({0, 1}), c01);
  if (c00 != 0) p.add_term(Monomial({0, 0}), c00);
  return p;
}

}  // namespace

SemialgebraicSet egg_set() {
  SemialgebraicSet S;
  S.n = 2;
  S.ineqs.push_back(quartic(1, 1, 1, 0, 1, 0));  // x1^4+x2^4+x1^2+x2
  return S;
}

SemialgebraicSet waterdrop_set() {
  SemialgebraicSet S;
  S.n = 2;
  S.ineqs.push_back(quartic(1, 1, 1, 1, 0, 0));  // x1^4+x2^4+x1^2+x2^3
  return S;
}

SemialgebraicSet singular_set(double shift) {
  SemialgebraicSet S;
  S.n = 2;
  S.ineqs.push_back(quartic(1, 1, 0, 1, 0, shift));  // x1^4+x2^4+x2^3+shift
  return S;
}

SemialgebraicSet hyperbola_set() {
  SemialgebraicSet S;
  S.n = 2;
  Polynomial p(2);
  p.add_term(Monomial({1, 1}), 1.0);
  p.add_term(Monomial({0, 0}), -1.0);
  S.ineqs.push_back(p);  // x1 x2 - 1
  S.ball_radius = 10.0;
  return S;
}

SemialgebraicSet named_set(const std::string& name, double a) {
  if (name == "egg") return egg_set();
  if (name == "waterdrop") return waterdrop_set();
  if (name == "singular") return singular_set();
  if (name == "singular+") return singular_set(1e-3);
  if (name == "singular-") return singular_set(-1e-3);
  if (name == "hyperbola") return hyperbola_set();
  if (name == "schur3") return schur3_region().set;
  if (name == "schur4") return schur4_region(a).set;
  throw std::invalid_argument("named_set: unknown fixture " + name);
}

}  // namespace convin
