#include "convin/inner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convin/curvature.hpp"

namespace convin {

namespace {

// Distinct x-parts of the minimizers of a curvature problem over the
// (x, y) ring: the same boundary point can appear with both tangent signs.
std::vector<std::vector<double>> x_parts(
    const std::vector<std::vector<double>>& mins, int n) {
  std::vector<std::vector<double>> out;
  for (const auto& m : mins) {
    std::vector<double> x(m.begin(), m.begin() + n);
    bool dup = false;
    for (const auto& y : out) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(x[i] - y[i]));
      if (d < 1e-6) dup = true;
    }
    if (!dup) out.push_back(std::move(x));
  }
  return out;
}

double gradient_norm(const Polynomial& piece, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& gj : gradient(piece)) {
    double v = gj.eval(x);
    s += v * v;
  }
  return std::sqrt(s);
}

bool same_cut(const Polynomial& a, const Polynomial& b, double tol) {
  Polynomial d = a - b;
  for (const auto& [m, c] : d.terms())
    if (std::abs(c) > tol) return false;
  return true;
}

}  // namespace

Polynomial separating_halfspace(const Polynomial& piece,
                                const std::vector<double>& x_star,
                                double eps) {
  const int n = piece.dimension();
  std::vector<double> g = eval(gradient(piece), x_star);
  double norm = 0.0;
  for (double v : g) norm += v * v;
  norm = std::sqrt(norm);
  if (norm < 1e-12)
    throw std::invalid_argument(
        "separating_halfspace: vanishing gradient at the boundary point");

  Polynomial cut(n);
  double offset = eps;
  for (int j = 0; j < n; ++j) {
    double c = g[j] / norm;
    cut.add_term(Monomial::variable(n, j), c);
    offset -= c * x_star[j];
  }
  return cut.plus_constant(offset);
}

ConvexityReport is_convex(const SemialgebraicSet& S,
                          const CertifyOptions& opts) {
  ConvexityReport rep;
  rep.certified = true;
  for (int i = 0; i < static_cast<int>(S.ineqs.size()); ++i) {
    if (S.ineqs[i].degree() <= 1) continue;
    auto res = certify(build_curvature_problem(S, i), opts);
    CurvatureCheck chk;
    chk.piece = i;
    chk.status = res.status;
    chk.bound = res.bound;
    chk.order_used = res.order_used;
    chk.minimizers = x_parts(res.minimizers, S.n);
    if (res.status == RelaxationStatus::infeasible) {
      chk.note = "boundary piece inactive";
    } else if (res.bound < -1e-7) {
      rep.certified = false;
      chk.note = res.status == RelaxationStatus::certified
                     ? "negative curvature certified"
                     : "negative bound, uncertified";
    }
    rep.checks.push_back(std::move(chk));
  }
  return rep;
}

InnerResult inner_approximation(const SemialgebraicSet& S,
                                const InnerOptions& opts) {
  const int n = S.n;
  const int npieces = static_cast<int>(S.ineqs.size());

  InnerResult res;
  res.piece_status.assign(npieces, PieceStatus::pending);
  for (int i = 0; i < npieces; ++i)
    if (S.ineqs[i].degree() <= 1) res.piece_status[i] = PieceStatus::convex;

  PolyVector working = S.ineqs;  // original pieces followed by cuts

  for (int round = 1; round <= opts.max_rounds; ++round) {
    bool any_pending = false;
    bool progressed = false;

    for (int i = 0; i < npieces; ++i) {
      if (res.piece_status[i] != PieceStatus::pending) continue;
      any_pending = true;

      PolyVector others;
      for (int j = 0; j < static_cast<int>(working.size()); ++j)
        if (j != i) others.push_back(working[j]);
      if (auto b = S.ball_polynomial()) others.push_back(*b);

      auto cert = certify(build_curvature_problem(working[i], others),
                          opts.certify);

      CurvatureCheck chk;
      chk.piece = i;
      chk.round = round;
      chk.status = cert.status;
      chk.bound = cert.bound;
      chk.order_used = cert.order_used;

      if (cert.status == RelaxationStatus::infeasible) {
        res.piece_status[i] = PieceStatus::inactive;
        chk.note = "boundary piece inactive";
        progressed = true;
      } else if (cert.bound >= -opts.curvature_tol) {
        res.piece_status[i] = PieceStatus::convex;
        if (cert.status != RelaxationStatus::certified)
          chk.note = "nonnegative lower bound";
        progressed = true;
      } else if (cert.status == RelaxationStatus::certified) {
        chk.minimizers = x_parts(cert.minimizers, n);
        std::vector<std::vector<double>> targets = chk.minimizers;
        if (opts.policy == CutPolicy::first_minimizer && targets.size() > 1) {
          targets.resize(1);
        } else if (opts.policy == CutPolicy::max_gradient_norm &&
                   targets.size() > 1) {
          auto best = std::max_element(
              targets.begin(), targets.end(),
              [&](const auto& a, const auto& b) {
                return gradient_norm(working[i], a) <
                       gradient_norm(working[i], b);
              });
          targets = {*best};
        }
        for (const auto& x : targets) {
          Polynomial cut = separating_halfspace(working[i], x, opts.eps);
          bool dup = false;
          for (const auto& c : res.cuts)
            if (same_cut(cut, c, opts.dup_tol)) dup = true;
          if (!dup) {
            res.cuts.push_back(cut);
            working.push_back(cut);
            ++chk.cuts_added;
          }
        }
        if (chk.cuts_added == 0) {
          // Every supporting halfspace at the certified minimizers is
          // already present, so the concave boundary is fully cut away.
          res.piece_status[i] = PieceStatus::saturated;
          chk.note = "cuts saturated";
        }
        progressed = true;
      } else {
        res.piece_status[i] = PieceStatus::inconclusive;
        chk.note = cert.bound > -opts.near_zero
                       ? "uncertified bound, numerically convex"
                       : "uncertified negative bound";
      }
      res.log.push_back(std::move(chk));
    }

    if (!any_pending || !progressed) break;
  }

  res.region.n = n;
  res.region.ineqs = std::move(working);
  res.convex_certified = true;
  for (auto st : res.piece_status)
    if (st != PieceStatus::convex && st != PieceStatus::inactive &&
        st != PieceStatus::saturated)
      res.convex_certified = false;
  return res;
}

}  // namespace convin
