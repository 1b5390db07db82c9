#include "convin/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace convin {

Monomial Monomial::variable(int n, int j) {
  std::vector<int> e(n, 0);
  e.at(j) = 1;
  return Monomial(std::move(e));
}

int Monomial::degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

Monomial Monomial::times(const Monomial& other) const {
  if (exponents.size() != other.exponents.size())
    throw std::invalid_argument("monomial dimension mismatch");
  Monomial r = *this;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    r.exponents[i] += other.exponents[i];
  return r;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  // Same degree: a < b when a is lexicographically larger (x1^2 before x1x2).
  return std::lexicographical_compare(b.exponents.begin(), b.exponents.end(),
                                      a.exponents.begin(), a.exponents.end());
}

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p(n);
  p.add_term(Monomial::constant(n), c);
  return p;
}

Polynomial Polynomial::variable(int n, int j) {
  Polynomial p(n);
  p.add_term(Monomial::variable(n, j), 1.0);
  return p;
}

Polynomial Polynomial::monomial(Monomial m, double coef) {
  Polynomial p(m.dimension());
  p.add_term(std::move(m), coef);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Monomial& m, double coef) {
  if (m.dimension() != n_)
    throw std::invalid_argument("term dimension mismatch");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (coef != 0.0) terms_.emplace(m, coef);
  } else {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("eval: point dimension mismatch");
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int j = 0; j < n_; ++j)
      for (int e = 0; e < m.exponents[j]; ++e) t *= x[j];
    total += t;
  }
  return total;
}

Polynomial Polynomial::diff(int j) const {
  if (j < 0 || j >= n_) throw std::out_of_range("diff: variable index");
  Polynomial r(n_);
  for (const auto& [m, c] : terms_) {
    if (m.exponents[j] == 0) continue;
    Monomial d = m;
    d.exponents[j] -= 1;
    r.add_term(d, c * m.exponents[j]);
  }
  return r;
}

void Polynomial::check_dim(const Polynomial& q) const {
  if (n_ != q.n_)
    throw std::invalid_argument("polynomial dimension mismatch");
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
  check_dim(q);
  Polynomial r = *this;
  for (const auto& [m, c] : q.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& q) const {
  check_dim(q);
  Polynomial r = *this;
  for (const auto& [m, c] : q.terms_) r.add_term(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& q) const {
  check_dim(q);
  Polynomial r(n_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : q.terms_) r.add_term(ma.times(mb), ca * cb);
  return r;
}

Polynomial Polynomial::operator-() const { return scaled(-1.0); }

Polynomial Polynomial::scaled(double s) const {
  Polynomial r(n_);
  if (s == 0.0) return r;
  for (const auto& [m, c] : terms_) r.add_term(m, c * s);
  return r;
}

Polynomial Polynomial::plus_constant(double c) const {
  Polynomial r = *this;
  r.add_term(Monomial::constant(n_), c);
  return r;
}

Polynomial Polynomial::lifted(int m, int offset) const {
  if (offset < 0 || n_ + offset > m)
    throw std::invalid_argument("lifted: target ring too small");
  Polynomial r(m);
  for (const auto& [mono, c] : terms_) {
    std::vector<int> e(m, 0);
    for (int j = 0; j < n_; ++j) e[j + offset] = mono.exponents[j];
    r.add_term(Monomial(std::move(e)), c);
  }
  return r;
}

bool Polynomial::same_terms(const Polynomial& q, double tol) const {
  if (n_ != q.n_) return false;
  Polynomial d = *this - q;
  for (const auto& [m, c] : d.terms())
    if (std::abs(c) > tol) return false;
  return true;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    double coef = c;
    if (first) {
      if (coef < 0) out << "-";
    } else {
      out << (coef < 0 ? " - " : " + ");
    }
    coef = std::abs(coef);
    bool has_vars = m.degree() > 0;
    if (coef != 1.0 || !has_vars) out << coef;
    bool star = coef != 1.0;
    for (int j = 0; j < n_; ++j) {
      if (m.exponents[j] == 0) continue;
      if (star || !has_vars) out << "*";
      star = true;
      if (static_cast<int>(names.size()) > j)
        out << names[j];
      else
        out << "x" << (j + 1);
      if (m.exponents[j] > 1) out << "^" << m.exponents[j];
    }
    first = false;
  }
  return out.str();
}

PolyVector gradient(const Polynomial& p) {
  PolyVector g;
  g.reserve(p.dimension());
  for (int j = 0; j < p.dimension(); ++j) g.push_back(p.diff(j));
  return g;
}

PolyMatrix hessian(const Polynomial& p) {
  int n = p.dimension();
  PolyMatrix h(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int j = 0; j < n; ++j) {
    Polynomial pj = p.diff(j);
    for (int k = j; k < n; ++k) {
      h[j][k] = pj.diff(k);
      h[k][j] = h[j][k];
    }
  }
  return h;
}

std::vector<double> eval(const PolyVector& g, const std::vector<double>& x) {
  std::vector<double> v;
  v.reserve(g.size());
  for (const auto& p : g) v.push_back(p.eval(x));
  return v;
}

std::vector<Monomial> monomials_up_to(int vars, int max_deg) {
  std::vector<Monomial> all;
  std::vector<int> e(vars, 0);
  // Enumerate recursively, then sort into grlex order.
  std::function<void(int, int)> rec = [&](int j, int remaining) {
    if (j == vars) {
      all.emplace_back(e);
      return;
    }
    for (int d = 0; d <= remaining; ++d) {
      e[j] = d;
      rec(j + 1, remaining - d);
    }
    e[j] = 0;
  };
  rec(0, max_deg);
  std::sort(all.begin(), all.end(), grlex_less);
  return all;
}

std::size_t monomial_count(int vars, int max_deg) {
  // C(vars + max_deg, max_deg)
  std::size_t r = 1;
  for (int i = 1; i <= vars; ++i)
    r = r * (max_deg + i) / i;
  return r;
}

}  // namespace convin
