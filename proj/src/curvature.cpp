#include "convin/curvature.hpp"

#include <stdexcept>

#include "convin/extract.hpp"

namespace convin {

PolyOptProblem build_curvature_problem(const Polynomial& piece,
                                       const PolyVector& others) {
  const int n = piece.dimension();
  if (piece.degree() <= 1)
    throw std::invalid_argument(
        "build_curvature_problem: affine piece has zero curvature, skip it");
  const int v = 2 * n;

  PolyVector g = gradient(piece);
  PolyMatrix H = hessian(piece);

  PolyOptProblem prob;
  prob.vars = v;

  // Objective y' H(x) y over the (x, y) ring.
  Polynomial obj(v);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Polynomial yj = Polynomial::variable(v, n + j);
      Polynomial yk = Polynomial::variable(v, n + k);
      obj = obj + H[j][k].lifted(v, 0) * yj * yk;
    }
  prob.objective = obj;

  prob.eqs.push_back(piece.lifted(v, 0));

  Polynomial tangency(v);
  for (int j = 0; j < n; ++j)
    tangency = tangency + g[j].lifted(v, 0) * Polynomial::variable(v, n + j);
  prob.eqs.push_back(tangency);

  Polynomial sphere(v);
  for (int j = 0; j < n; ++j) {
    Polynomial yj = Polynomial::variable(v, n + j);
    sphere = sphere + yj * yj;
  }
  prob.eqs.push_back(sphere.plus_constant(-1.0));

  for (const auto& q : others) prob.ineqs.push_back(q.lifted(v, 0));
  return prob;
}

PolyOptProblem build_curvature_problem(const SemialgebraicSet& S, int i) {
  if (i < 0 || i >= static_cast<int>(S.ineqs.size()))
    throw std::out_of_range("build_curvature_problem: piece index");
  PolyVector others;
  for (int j = 0; j < static_cast<int>(S.ineqs.size()); ++j)
    if (j != i) others.push_back(S.ineqs[j]);
  if (auto b = S.ball_polynomial()) others.push_back(*b);
  return build_curvature_problem(S.ineqs[i], others);
}

NondegeneracyReport check_assumption_nondegenerate(const SemialgebraicSet& S,
                                                   int i, int max_order) {
  if (i < 0 || i >= static_cast<int>(S.ineqs.size()))
    throw std::out_of_range("check_assumption_nondegenerate: piece index");
  const Polynomial& p = S.ineqs[i];
  const int n = p.dimension();

  PolyOptProblem feas;
  feas.vars = n;
  feas.objective = Polynomial::zero(n);
  feas.eqs.push_back(p);
  for (const auto& gj : gradient(p)) feas.eqs.push_back(gj);
  for (int j = 0; j < static_cast<int>(S.ineqs.size()); ++j)
    if (j != i) feas.ineqs.push_back(S.ineqs[j]);
  if (auto b = S.ball_polynomial()) feas.ineqs.push_back(*b);

  NondegeneracyReport rep;
  CertifyOptions opts;
  opts.max_order = max_order;
  CertifiedOptimum res = certify(feas, opts);
  switch (res.status) {
    case RelaxationStatus::infeasible:
      rep.status = NondegeneracyReport::Status::holds;
      break;
    case RelaxationStatus::certified:
      rep.status = NondegeneracyReport::Status::violated;
      if (!res.minimizers.empty()) rep.witness = res.minimizers.front();
      break;
    default:
      rep.status = NondegeneracyReport::Status::unknown;
      break;
  }
  return rep;
}

}  // namespace convin
