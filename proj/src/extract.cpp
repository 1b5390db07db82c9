#include "convin/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "convin/moment.hpp"

namespace convin {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Gauss-Jordan reduction scanning columns left to right (grlex order), so
// the pivot monomials form the lowest-degree basis of the column space.
std::vector<int> rref(MatrixXd& A, double tol) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < A.cols() && row < A.rows(); ++col) {
    int imax = row;
    for (int i = row + 1; i < A.rows(); ++i)
      if (std::abs(A(i, col)) > std::abs(A(imax, col))) imax = i;
    if (std::abs(A(imax, col)) <= tol) continue;
    A.row(row).swap(A.row(imax));
    A.row(row) /= A(row, col);
    for (int i = 0; i < A.rows(); ++i)
      if (i != row) A.row(i) -= A(i, col) * A.row(row);
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Local Gauss-Newton refinement onto the active constraint manifold.  The
// extracted points inherit the accuracy of the moment solve (~1e-4), while
// verification demands much tighter feasibility, so each candidate is
// polished against the equalities plus any violated inequalities first.
void polish_minimizer(const PolyOptProblem& prob, std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  for (int it = 0; it < 30; ++it) {
    std::vector<const Polynomial*> active;
    for (const auto& h : prob.eqs) active.push_back(&h);
    for (const auto& g : prob.ineqs)
      if (g.eval(x) > 0.0) active.push_back(&g);
    const int r = static_cast<int>(active.size());
    if (r == 0) return;
    Eigen::VectorXd res(r);
    Eigen::MatrixXd J(r, n);
    for (int i = 0; i < r; ++i) {
      res(i) = active[i]->eval(x);
      for (int j = 0; j < n; ++j) J(i, j) = active[i]->diff(j).eval(x);
    }
    if (res.lpNorm<Eigen::Infinity>() < 1e-13) break;
    // Minimum-norm step for the underdetermined system J dx = -res.
    Eigen::VectorXd dx =
        J.completeOrthogonalDecomposition().solve((-res).eval());
    if (!dx.allFinite() || dx.norm() > 1.0) return;
    for (int j = 0; j < n; ++j) x[j] += dx(j);
  }

  // Second stage: Newton on the KKT system of the equality-constrained
  // problem, sharpening stationarity so the objective value matches the
  // certified bound to full precision.  Inequalities active at the point
  // are treated as equalities.
  std::vector<const Polynomial*> act;
  for (const auto& h : prob.eqs) act.push_back(&h);
  for (const auto& g : prob.ineqs)
    if (std::abs(g.eval(x)) < 1e-7) act.push_back(&g);
  const int r = static_cast<int>(act.size());
  if (r == 0) return;
  const std::vector<double> x0 = x;
  std::vector<double> xc = x;
  auto kkt = [&](const std::vector<double>& pt, const Eigen::VectorXd& lam,
                 Eigen::VectorXd& R, Eigen::MatrixXd& K) {
    Eigen::MatrixXd J(r, n);
    Eigen::MatrixXd HL(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        HL(i, j) = prob.objective.diff(i).diff(j).eval(pt);
    Eigen::VectorXd grad(n);
    for (int j = 0; j < n; ++j) grad(j) = prob.objective.diff(j).eval(pt);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < n; ++j) J(i, j) = act[i]->diff(j).eval(pt);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          HL(a, b) += lam(i) * act[i]->diff(a).diff(b).eval(pt);
    }
    R.resize(n + r);
    R.head(n) = grad + J.transpose() * lam;
    for (int i = 0; i < r; ++i) R(n + i) = act[i]->eval(pt);
    K.setZero(n + r, n + r);
    K.topLeftCorner(n, n) = HL;
    K.topRightCorner(n, r) = J.transpose();
    K.bottomLeftCorner(r, n) = J;
  };
  // Multiplier start from the stationarity least-squares fit.
  Eigen::MatrixXd J0(r, n);
  Eigen::VectorXd g0(n);
  for (int j = 0; j < n; ++j) g0(j) = prob.objective.diff(j).eval(xc);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) J0(i, j) = act[i]->diff(j).eval(xc);
  Eigen::VectorXd lam =
      J0.transpose().completeOrthogonalDecomposition().solve(-g0);
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd R;
    Eigen::MatrixXd K;
    kkt(xc, lam, R, K);
    if (R.lpNorm<Eigen::Infinity>() < 1e-12) break;
    Eigen::VectorXd d = K.completeOrthogonalDecomposition().solve((-R).eval());
    if (!d.allFinite() || d.head(n).norm() > 0.5) return;
    for (int j = 0; j < n; ++j) xc[j] += d(j);
    lam += d.tail(r);
  }
  // Accept only a nearby stationary point that is still feasible.
  double drift = 0.0;
  for (int j = 0; j < n; ++j) drift = std::max(drift, std::abs(xc[j] - x0[j]));
  if (drift > 0.05) return;
  for (const auto& g : prob.ineqs)
    if (g.eval(xc) > 1e-9) return;
  for (const auto& h : prob.eqs)
    if (std::abs(h.eval(xc)) > 1e-9) return;
  x = xc;
}

bool verify_minimizer(const PolyOptProblem& prob, const std::vector<double>& x,
                      double bound, const CertifyOptions& opts) {
  for (const auto& h : prob.eqs)
    if (std::abs(h.eval(x)) > opts.feas_tol) return false;
  for (const auto& g : prob.ineqs)
    if (g.eval(x) > opts.feas_tol) return false;
  double v = prob.objective.eval(x);
  return std::abs(v - bound) <= opts.obj_tol * (1.0 + std::abs(bound));
}

}  // namespace

int numerical_rank(const MatrixXd& M, double rank_tol) {
  if (M.rows() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  double smax = s(0);
  if (smax <= 0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * smax) ++r;
  return r;
}

bool check_flatness(const SdpProblem& prob, const VectorXd& moments,
                    double rank_tol, std::vector<int>* ranks) {
  const int k = prob.basis.order;
  std::vector<int> rk(k + 1);
  for (int d = 0; d <= k; ++d)
    rk[d] = numerical_rank(moment_matrix(prob, moments, d), rank_tol);
  bool flat = k >= 1 && rk[k - 1] == rk[k];
  if (ranks) *ranks = std::move(rk);
  return flat;
}

std::vector<std::vector<double>> extract_minimizers(
    const SdpProblem& prob, const VectorXd& moments,
    const CertifyOptions& opts, int level) {
  const int n = prob.basis.vars;
  const int k = level < 0 ? prob.basis.order : level;
  MatrixXd M = moment_matrix(prob, moments, k);
  const int N = static_cast<int>(M.rows());

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  const VectorXd& ev = es.eigenvalues();
  double emax = std::max(ev.maxCoeff(), 0.0);
  if (emax <= 0) return {};
  std::vector<int> keep;
  for (int i = 0; i < N; ++i)
    if (ev(i) > opts.rank_tol * emax) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  if (r == 0) return {};

  // Rows of W are scaled eigenvectors: M = W' W with W of full row rank r.
  MatrixXd W(r, N);
  for (int i = 0; i < r; ++i)
    W.row(i) = std::sqrt(ev(keep[i])) * es.eigenvectors().col(keep[i]).transpose();

  double wmax = W.cwiseAbs().maxCoeff();
  std::vector<int> pivots = rref(W, 1e-7 * std::max(1.0, wmax));
  if (static_cast<int>(pivots.size()) != r) return {};
  // Multiplying a pivot monomial by one variable must stay within the
  // moments carried by the relaxation; below the top level the products
  // reach into the next moment block, so full-degree pivots are fine there.
  const int max_pivot_deg = k < prob.basis.order ? k : k - 1;
  for (int c : pivots)
    if (prob.basis.monos[c].degree() > max_pivot_deg) return {};

  // Multiplication operators on the pivot basis: column j of Nmats[i] holds
  // the coordinates of x_i * beta_j in the span of the pivot columns of M.
  // Columns for products of degree k+1 are rebuilt from the moment vector.
  MatrixXd P(N, r);
  for (int j = 0; j < r; ++j) P.col(j) = M.col(pivots[j]);
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> pcod(P);
  if (pcod.rank() != r) return {};
  std::vector<MatrixXd> Nmats(n, MatrixXd::Zero(r, r));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) {
      Monomial target =
          prob.basis.monos[pivots[j]].times(Monomial::variable(n, i));
      VectorXd v(N);
      for (int l = 0; l < N; ++l) {
        int mi = prob.moment_index(prob.basis.monos[l].times(target));
        if (mi < 0) return {};
        v(l) = moments(mi);
      }
      Nmats[i].col(j) = pcod.solve(v);
    }

  // Simultaneous diagonalization via the ordered real Schur form of a random
  // convex combination; retry with fresh weights if complex pairs appear.
  std::mt19937 rng(opts.rng_seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = unif(rng);
    lam /= lam.sum();
    MatrixXd Ncomb = MatrixXd::Zero(r, r);
    for (int i = 0; i < n; ++i) Ncomb += lam(i) * Nmats[i];

    Eigen::RealSchur<MatrixXd> schur(Ncomb);
    if (schur.info() != Eigen::Success) continue;
    const MatrixXd& T = schur.matrixT();
    double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
    bool triangular = true;
    for (int l = 0; l + 1 < r; ++l)
      if (std::abs(T(l + 1, l)) > 1e-3 * scale) triangular = false;
    if (!triangular) continue;

    const MatrixXd& Q = schur.matrixU();
    std::vector<std::vector<double>> points;
    for (int l = 0; l < r; ++l) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i)
        x[i] = Q.col(l).dot(Nmats[i] * Q.col(l));
      bool dup = false;
      for (const auto& y : points) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d = std::max(d, std::abs(x[i] - y[i]));
        if (d < 1e-6) dup = true;
      }
      if (!dup) points.push_back(std::move(x));
    }
    return points;
  }
  return {};
}

CertifiedOptimum certify(const PolyOptProblem& prob,
                         const CertifyOptions& opts) {
  CertifiedOptimum out;
  out.bound = -std::numeric_limits<double>::infinity();
  const int kmin = min_relaxation_order(prob);
  bool has_bound = false;

  for (int k = kmin; k <= std::max(kmin, opts.max_order); ++k) {
    SdpProblem sdp = build_relaxation(prob, k);
    SdpSolution sol = solve_sdp(sdp, opts.sdp);

    OrderLog log;
    log.order = k;
    log.sdp_status = sol.status;

    if (sol.status == SdpStatus::infeasible) {
      out.status = RelaxationStatus::infeasible;
      out.order_used = k;
      log.note = "relaxation infeasible";
      out.log.push_back(std::move(log));
      return out;
    }
    if (sol.status == SdpStatus::unbounded) {
      log.note = "relaxation unbounded";
      out.log.push_back(std::move(log));
      continue;
    }
    if (sol.status == SdpStatus::numerical_failure) {
      // Even without full convergence, the returned dual matrix may satisfy
      // the affine constraints to machine precision, in which case its
      // objective is a valid lower bound worth recording; only the gap to the
      // primal value is unresolved.
      if (sol.primal_residual <= 1e-8 && sol.dual_residual <= 1e-8) {
        log.bound = sol.dual_obj;
        log.note = "bound from feasible certificate; gap not closed";
        if (!has_bound || sol.dual_obj > out.bound) {
          out.bound = sol.dual_obj;
          out.order_used = k;
          has_bound = true;
        }
      } else {
        log.note = "solver did not converge";
      }
      out.log.push_back(std::move(log));
      continue;
    }

    log.bound = sol.dual_obj;
    if (!has_bound || sol.dual_obj > out.bound) {
      out.bound = sol.dual_obj;
      out.order_used = k;
      has_bound = true;
    }

    // The flatness test needs a previous moment level that is itself a
    // relaxation level, so it only starts one order above the minimum.
    if (k >= kmin + 1) {
      check_flatness(sdp, sol.moment_values, opts.rank_tol, &log.ranks);
      // A rank plateau at any level d flags a candidate atomic truncation;
      // extraction is attempted at the lowest such level first.  If no
      // plateau level yields verified points, the remaining levels are tried
      // as well: a successful extraction only certifies when every candidate
      // is feasible and attains the bound, which is sound regardless of how
      // the level was chosen.
      for (int pass = 0; pass < 2 && !log.extracted; ++pass) {
        for (int d = 1; d <= k && !log.extracted; ++d) {
          bool plateau = log.ranks[d - 1] == log.ranks[d];
          if (pass == 0 ? !plateau : plateau) continue;
          if (plateau) log.flat = true;
          auto pts = extract_minimizers(sdp, sol.moment_values, opts, d);
          std::vector<std::vector<double>> good;
          for (auto& x : pts) {
            polish_minimizer(prob, x);
            bool dup = false;
            for (const auto& y : good) {
              double dist = 0.0;
              for (std::size_t i = 0; i < x.size(); ++i)
                dist = std::max(dist, std::abs(x[i] - y[i]));
              if (dist < 1e-6) dup = true;
            }
            // Candidates are checked against the primal relaxation value: the
            // moment vector is feasible to machine precision, so its objective
            // is the relaxation optimum up to the solver gap, while the dual
            // value can lag behind on degenerate problems.  A feasible point
            // attaining that value certifies optimality; candidates that fail
            // are simply dropped.
            if (!dup && verify_minimizer(prob, x, sol.primal_obj, opts))
              good.push_back(std::move(x));
          }
          if (!good.empty()) {
            double attained = std::numeric_limits<double>::infinity();
            for (const auto& x : good)
              attained = std::min(attained, prob.objective.eval(x));
            log.extracted = true;
            out.log.push_back(std::move(log));
            out.status = RelaxationStatus::certified;
            out.bound = attained;
            out.order_used = k;
            out.minimizers = std::move(good);
            return out;
          }
          log.note = pts.empty() ? "extraction failed"
                                 : "extracted points failed verification";
        }
      }
    }
    out.log.push_back(std::move(log));
  }

  out.status = RelaxationStatus::bound_only;
  return out;
}

}  // namespace convin
