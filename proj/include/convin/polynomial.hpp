#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace convin {

// Exponent vector of a monomial; length equals the ambient dimension.
struct Monomial {
  std::vector<int> exponents;

  Monomial() = default;
  explicit Monomial(std::vector<int> e) : exponents(std::move(e)) {}
  static Monomial constant(int n) { return Monomial(std::vector<int>(n, 0)); }
  static Monomial variable(int n, int j);  // x_j, 0-based

  int dimension() const { return static_cast<int>(exponents.size()); }
  int degree() const;
  Monomial times(const Monomial& other) const;
};

// Graded-lexicographic order: lower total degree first, ties broken by
// lexicographically larger exponent vector first (x1^2 < x1*x2 < x2^2).
bool grlex_less(const Monomial& a, const Monomial& b);

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return grlex_less(a, b);
  }
};

// Sparse real multivariate polynomial: map from exponent vectors to
// coefficients. Zero coefficients are never stored (exact 0.0 pruning only).
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GrlexLess>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial zero(int n) { return Polynomial(n); }
  static Polynomial constant(int n, double c);
  static Polynomial variable(int n, int j);  // x_j, 0-based
  static Polynomial monomial(Monomial m, double coef);

  int dimension() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Degree of the zero polynomial is defined as 0.
  int degree() const;

  double coefficient(const Monomial& m) const;
  void add_term(const Monomial& m, double coef);

  double eval(const std::vector<double>& x) const;
  Polynomial diff(int j) const;  // formal partial derivative, 0-based index

  Polynomial operator+(const Polynomial& q) const;
  Polynomial operator-(const Polynomial& q) const;
  Polynomial operator*(const Polynomial& q) const;
  Polynomial operator-() const;
  Polynomial scaled(double s) const;
  Polynomial plus_constant(double c) const;

  // Embeds into a larger ring of dimension m >= n, variables mapped by
  // index shift: x_j -> x_{j+offset}.
  Polynomial lifted(int m, int offset) const;

  bool same_terms(const Polynomial& q, double tol = 0.0) const;
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  void check_dim(const Polynomial& q) const;
  int n_ = 0;
  TermMap terms_;
};

using PolyVector = std::vector<Polynomial>;
// Symmetric matrix of polynomials, stored densely; H[j][k] == H[k][j].
using PolyMatrix = std::vector<std::vector<Polynomial>>;

PolyVector gradient(const Polynomial& p);
PolyMatrix hessian(const Polynomial& p);

std::vector<double> eval(const PolyVector& g, const std::vector<double>& x);

// All monomials of `vars` variables with total degree <= max_deg, grlex order.
std::vector<Monomial> monomials_up_to(int vars, int max_deg);

// C(n + d, d), the count returned by monomials_up_to.
std::size_t monomial_count(int vars, int max_deg);

}  // namespace convin
