#include "convin/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace convin {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using BlockMat = std::vector<MatrixXd>;

double inner(const BlockMat& a, const BlockMat& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i].array() * b[i].array()).sum();
  return s;
}

double fro_norm(const BlockMat& a) { return std::sqrt(inner(a, a)); }

void axpy(BlockMat& y, double alpha, const BlockMat& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// The relaxation with its linear equality rows eliminated:
//   minimize c'w + offset  s.t.  S(w) = F0 + sum_j w_j F_j >= 0,
// with moments recovered as y = y_part + Z w.
struct ReducedLmi {
  bool inconsistent = false;
  std::vector<int> dims;
  BlockMat F0;
  std::vector<BlockMat> F;  // one BlockMat per reduced variable
  VectorXd c;
  double offset = 0.0;
  MatrixXd Z;
  VectorXd y_part;
  // Facial reduction: per-block orthonormal range basis. The equality rows
  // typically force exact nullspaces common to every block coefficient
  // (polynomials vanishing identically on the feasible support), so the
  // blocks are projected onto the complement to restore an interior.
  std::vector<MatrixXd> range;
};

// Common nullspace of all coefficient matrices of one block, detected via
// the spectrum of the Gram accumulation G = F0^2 + sum_j F_j^2.
MatrixXd common_range(const MatrixXd& F0, const std::vector<BlockMat>& F,
                      std::size_t b) {
  MatrixXd G = F0 * F0;
  for (const auto& Fj : F) G += Fj[b] * Fj[b];
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
  const VectorXd& ev = es.eigenvalues();
  double emax = std::max(ev.maxCoeff(), 0.0);
  std::vector<int> keep;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-22 * emax) keep.push_back(i);
  MatrixXd P(G.rows(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    P.col(i) = es.eigenvectors().col(keep[i]);
  return P;
}

ReducedLmi reduce(const SdpProblem& prob) {
  ReducedLmi red;
  const int M = static_cast<int>(prob.moments.size());
  const int R = static_cast<int>(prob.eq_rows.size());

  MatrixXd E = MatrixXd::Zero(R, M);
  VectorXd d = VectorXd::Zero(R);
  for (int r = 0; r < R; ++r) {
    double scale = 0.0;
    for (const auto& [i, c] : prob.eq_rows[r].terms)
      scale = std::max(scale, std::abs(c));
    scale = std::max(scale, std::abs(prob.eq_rhs[r]));
    if (scale == 0.0) scale = 1.0;
    for (const auto& [i, c] : prob.eq_rows[r].terms) E(r, i) = c / scale;
    d(r) = prob.eq_rhs[r] / scale;
  }

  Eigen::ColPivHouseholderQR<MatrixXd> qr(E);
  qr.setThreshold(1e-11);
  const int rank = static_cast<int>(qr.rank());

  red.y_part = qr.solve(d);
  if ((E * red.y_part - d).lpNorm<Eigen::Infinity>() > 1e-8) {
    red.inconsistent = true;
    return red;
  }

  const int m = M - rank;
  red.Z = MatrixXd::Zero(M, m);
  if (m > 0) {
    MatrixXd Rmat = qr.matrixR()
                        .topRows(rank)
                        .template triangularView<Eigen::Upper>();
    MatrixXd R11 = Rmat.leftCols(rank);
    MatrixXd R12 = Rmat.rightCols(M - rank);
    MatrixXd top = -R11.triangularView<Eigen::Upper>().solve(R12);
    MatrixXd Zp(M, m);
    Zp.topRows(rank) = top;
    Zp.bottomRows(m) = MatrixXd::Identity(m, m);
    red.Z = qr.colsPermutation() * Zp;
    // Orthonormal null-space basis keeps the reduced variables on a common
    // scale; project the particular solution onto the row space so the
    // affine part carries no null-space component.
    Eigen::HouseholderQR<MatrixXd> zqr(red.Z);
    red.Z = MatrixXd(zqr.householderQ()).leftCols(m);
    red.y_part -= red.Z * (red.Z.transpose() * red.y_part);
  }

  for (const auto& blk : prob.blocks) red.dims.push_back(blk.dim);
  red.F0.resize(prob.blocks.size());
  red.F.assign(m, BlockMat(prob.blocks.size()));
  for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
    const int dim = prob.blocks[b].dim;
    red.F0[b] = MatrixXd::Zero(dim, dim);
    for (int j = 0; j < m; ++j) red.F[j][b] = MatrixXd::Zero(dim, dim);
  }
  for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
    for (const auto& [i, j, form] : prob.blocks[b].entries) {
      double f0 = 0.0;
      for (const auto& [mi, coef] : form.terms) f0 += coef * red.y_part(mi);
      red.F0[b](i, j) = f0;
      red.F0[b](j, i) = f0;
      for (int w = 0; w < m; ++w) {
        double fw = 0.0;
        for (const auto& [mi, coef] : form.terms) fw += coef * red.Z(mi, w);
        if (fw != 0.0) {
          red.F[w][b](i, j) = fw;
          red.F[w][b](j, i) = fw;
        }
      }
    }
  }

  red.c = VectorXd::Zero(m);
  red.offset = 0.0;
  for (const auto& [mi, coef] : prob.objective.terms) {
    red.offset += coef * red.y_part(mi);
    for (int w = 0; w < m; ++w) red.c(w) += coef * red.Z(mi, w);
  }

  // Facial reduction of each block.
  red.range.resize(prob.blocks.size());
  for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
    MatrixXd P = common_range(red.F0[b], red.F, b);
    if (P.cols() == P.rows()) {
      // Full-dimensional face: the block keeps its original basis, so the
      // re-embedding map must be the identity, not the eigenvector basis.
      red.range[b] = MatrixXd::Identity(P.rows(), P.rows());
      continue;
    }
    red.range[b] = P;
    red.F0[b] = (P.transpose() * red.F0[b] * P).eval();
    for (int j = 0; j < m; ++j)
      red.F[j][b] = (P.transpose() * red.F[j][b] * P).eval();
    red.dims[b] = static_cast<int>(P.cols());
  }
  return red;
}

// Largest alpha in (0, 1] with M + alpha * dM >= 0, via the generalized
// eigenvalue bound on the Cholesky-whitened step.
double max_step(const BlockMat& M, const BlockMat& dM) {
  double alpha = 1.0;
  for (std::size_t b = 0; b < M.size(); ++b) {
    MatrixXd W;
    Eigen::LLT<MatrixXd> llt(M[b]);
    if (llt.info() == Eigen::Success) {
      MatrixXd L = llt.matrixL();
      W = L.template triangularView<Eigen::Lower>().solve(dM[b]);
      W = L.template triangularView<Eigen::Lower>()
              .solve(W.transpose())
              .transpose();
    } else {
      // Nearly singular iterate: whiten with an eigenvalue-floored inverse
      // square root so a usable step fraction still comes out.
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(M[b]);
      VectorXd ev = es.eigenvalues();
      double floor_ev = std::max(ev.maxCoeff(), 1e-300) * 1e-14;
      MatrixXd R = es.eigenvectors() *
                   ev.cwiseMax(floor_ev).cwiseSqrt().cwiseInverse().asDiagonal();
      W = R.transpose() * dM[b] * R;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (W + W.transpose()),
                                               Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

struct IpmState {
  SdpStatus status = SdpStatus::numerical_failure;
  VectorXd w;
  BlockMat X, S;
  double pobj = 0.0, dobj = 0.0;
  double rp_rel = 0.0, rd_rel = 0.0, gap_rel = 0.0;
  int iterations = 0;
};

// Infeasible-start primal-dual interior point method with the symmetrized
// Newton (HKM) direction and Mehrotra predictor-corrector, on
//   min c'w  s.t.  S(w) = F0 + sum_j w_j F_j >= 0
// paired with its conic dual  max -<F0, X>  s.t.  <F_j, X> = c_j, X >= 0.
IpmState run_ipm(const std::vector<int>& dims, const BlockMat& F0_in,
                 const std::vector<BlockMat>& F_in, const VectorXd& c,
                 const SdpOptions& opts) {
  const int m = static_cast<int>(c.size());
  const int nblocks = static_cast<int>(dims.size());
  double ntot = 0.0;
  for (int d : dims) ntot += d;

  // Per-block equilibration: rescaling a block rescales the matching primal
  // and dual blocks inversely, leaving objective and feasibility invariant,
  // but evens out blocks whose polynomial data differ by orders of magnitude.
  BlockMat F0 = F0_in;
  std::vector<BlockMat> F = F_in;
  std::vector<double> bscale(nblocks, 1.0);
  for (int b = 0; b < nblocks; ++b) {
    double nrm = F0[b].lpNorm<Eigen::Infinity>();
    for (int j = 0; j < m; ++j)
      nrm = std::max(nrm, F[j][b].lpNorm<Eigen::Infinity>());
    if (nrm > 0) {
      bscale[b] = 1.0 / nrm;
      F0[b] *= bscale[b];
      for (int j = 0; j < m; ++j) F[j][b] *= bscale[b];
    }
  }
  auto unscale = [&](IpmState s) {
    for (int b = 0; b < nblocks; ++b) {
      s.S[b] /= bscale[b];
      s.X[b] *= bscale[b];
    }
    return s;
  };

  IpmState st;
  st.w = VectorXd::Zero(m);

  double f_scale = 1.0;
  for (const auto& blk : F0) f_scale = std::max(f_scale, blk.lpNorm<Eigen::Infinity>());
  for (const auto& Fj : F)
    for (const auto& blk : Fj)
      f_scale = std::max(f_scale, blk.lpNorm<Eigen::Infinity>());
  const double init_scale =
      10.0 * std::max({1.0, f_scale, c.lpNorm<Eigen::Infinity>()});

  st.X.resize(nblocks);
  st.S.resize(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    st.X[b] = init_scale * MatrixXd::Identity(dims[b], dims[b]);
    st.S[b] = init_scale * MatrixXd::Identity(dims[b], dims[b]);
  }

  const double c_norm = 1.0 + c.lpNorm<Eigen::Infinity>();
  const double f0_norm = 1.0 + fro_norm(F0);

  BlockMat Rd(nblocks), G(nblocks), dS(nblocks), dX(nblocks), dXa(nblocks),
      dSa(nblocks);
  VectorXd rp(m), gvec(m), rhs(m), dw(m), dwa(m);

  // Gram matrix of the constraint maps, used to correct the primal search
  // direction so the linearized feasibility equations hold exactly.
  MatrixXd AAT(m, m);
  for (int j = 0; j < m; ++j)
    for (int l = j; l < m; ++l) {
      double v = 0.0;
      for (int b = 0; b < nblocks; ++b)
        v += (F[j][b].array() * F[l][b].array()).sum();
      AAT(j, l) = v;
      AAT(l, j) = v;
    }
  Eigen::LDLT<MatrixXd> aat_ldlt(AAT);
  const bool aat_ok = aat_ldlt.info() == Eigen::Success &&
                      (aat_ldlt.vectorD().array() > 0).all();

  double best_merit = std::numeric_limits<double>::infinity();
  IpmState best = st;
  int stall = 0;
  int kicks = 0;
  double last_ap = 1.0, last_ad = 1.0;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    st.iterations = iter;
    // Residuals.
    for (int b = 0; b < nblocks; ++b) {
      Rd[b] = F0[b] - st.S[b];
      for (int j = 0; j < m; ++j) Rd[b] += st.w(j) * F[j][b];
    }
    for (int j = 0; j < m; ++j) rp(j) = c(j) - inner(F[j], st.X);
    const double mu = inner(st.X, st.S) / ntot;

    st.pobj = c.dot(st.w);
    st.dobj = -inner(F0, st.X);
    st.rp_rel = rp.lpNorm<Eigen::Infinity>() / c_norm;
    st.rd_rel = fro_norm(Rd) / f0_norm;
    st.gap_rel =
        std::abs(st.pobj - st.dobj) / (1.0 + std::abs(st.pobj) + std::abs(st.dobj));
    const double merit = std::max({st.rp_rel, st.rd_rel, st.gap_rel});

    if (opts.verbose)
      std::cerr << "iter " << iter << " mu " << mu << " pobj " << st.pobj
                << " dobj " << st.dobj << " rp " << st.rp_rel << " rd "
                << st.rd_rel << " laststep " << last_ap << " " << last_ad
                << "\n";

    bool improved = false;
    if (merit < best_merit) {
      if (merit < 0.9 * best_merit) stall = 0;
      best_merit = merit;
      best = st;
      improved = true;
    }
    // Score the iterate again with the dual matrix projected exactly onto
    // <F_j, X> = c_j.  When the projection stays positive semidefinite this
    // removes the primal residual from the merit, and the stored solution is
    // then backed by an exactly feasible dual certificate.
    if (aat_ok && st.rp_rel > st.gap_rel) {
      VectorXd lam = aat_ldlt.solve(rp);
      BlockMat Xp = st.X;
      double lmin_rel = 0.0;
      for (int b = 0; b < nblocks; ++b) {
        for (int j = 0; j < m; ++j) Xp[b] += lam(j) * F[j][b];
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Xp[b],
                                                   Eigen::EigenvaluesOnly);
        double lmax = std::max(es.eigenvalues().maxCoeff(), 1e-300);
        lmin_rel = std::min(lmin_rel, es.eigenvalues().minCoeff() / lmax);
      }
      if (lmin_rel >= -1e-12) {
        IpmState pr = st;
        pr.X = std::move(Xp);
        pr.dobj = -inner(F0, pr.X);
        VectorXd rp_p(m);
        for (int j = 0; j < m; ++j) rp_p(j) = c(j) - inner(F[j], pr.X);
        pr.rp_rel = rp_p.lpNorm<Eigen::Infinity>() / c_norm;
        pr.gap_rel = std::abs(pr.pobj - pr.dobj) /
                     (1.0 + std::abs(pr.pobj) + std::abs(pr.dobj));
        double merit_p = std::max({pr.rp_rel, pr.rd_rel, pr.gap_rel});
        if (merit_p < best_merit) {
          if (merit_p < 0.9 * best_merit) stall = 0;
          best_merit = merit_p;
          best = std::move(pr);
          improved = true;
        }
      }
    }
    if (!improved) ++stall;

    if (merit <= opts.tol) {
      st.status = SdpStatus::optimal;
      return unscale(st);
    }
    // Divergence-based certificates: an improving ray on either side.
    if (st.dobj > opts.diverge_threshold &&
        rp.lpNorm<Eigen::Infinity>() <= 1e-4 * fro_norm(st.X)) {
      st.status = SdpStatus::infeasible;
      return unscale(st);
    }
    if (st.pobj < -opts.diverge_threshold &&
        fro_norm(Rd) <= 1e-6 * f0_norm * (1.0 + st.w.norm())) {
      st.status = SdpStatus::unbounded;
      return unscale(st);
    }
    if (stall > 25) break;

    // Factor S blocks and form the Schur complement
    //   B_jl = tr(F_j X F_l S^{-1})  (symmetric positive definite).
    std::vector<MatrixXd> Sinv(nblocks);
    for (int b = 0; b < nblocks; ++b) {
      Eigen::LLT<MatrixXd> sllt(st.S[b]);
      if (sllt.info() == Eigen::Success) {
        Sinv[b] = sllt.solve(MatrixXd::Identity(dims[b], dims[b]));
      } else {
        // Nearly singular dual block: invert with floored eigenvalues so the
        // iteration can continue instead of aborting.
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(st.S[b]);
        VectorXd ev = es.eigenvalues();
        double floor_ev = std::max(ev.maxCoeff(), 1e-300) * 1e-14;
        Sinv[b] = es.eigenvectors() *
                  ev.cwiseMax(floor_ev).cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
      }
    }

    MatrixXd B = MatrixXd::Zero(m, m);
    for (int l = 0; l < m; ++l) {
      for (int b = 0; b < nblocks; ++b) {
        MatrixXd P = st.X[b] * F[l][b] * Sinv[b];
        for (int j = l; j < m; ++j) {
          double v = (F[j][b].array() * P.transpose().array()).sum();
          B(j, l) += v;
        }
      }
    }
    B = B.selfadjointView<Eigen::Lower>();

    Eigen::LDLT<MatrixXd> bldlt;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      MatrixXd Breg = B;
      if (ridge > 0) Breg.diagonal().array() += ridge;
      bldlt.compute(Breg);
      if (bldlt.info() == Eigen::Success &&
          (bldlt.vectorD().array() > 0).all())
        break;
      ridge = (ridge == 0.0) ? 1e-12 * (1.0 + B.trace() / m) : ridge * 100.0;
    }

    auto solve_direction = [&](const BlockMat& Rc, VectorXd& dw_out,
                               BlockMat& dS_out, BlockMat& dX_out) {
      for (int b = 0; b < nblocks; ++b)
        G[b] = (Rc[b] - st.X[b] * Rd[b]) * Sinv[b];
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int b = 0; b < nblocks; ++b) {
          MatrixXd Gs = 0.5 * (G[b] + G[b].transpose());
          s += (F[j][b].array() * Gs.array()).sum();
        }
        gvec(j) = s;
      }
      rhs = gvec - rp;
      dw_out = bldlt.solve(rhs);
      // Iterative refinement against the unregularized Schur matrix keeps
      // the search direction accurate once B becomes ill conditioned.
      for (int ref = 0; ref < 3; ++ref) {
        VectorXd res = rhs - B * dw_out;
        if (res.lpNorm<Eigen::Infinity>() <=
            1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>()))
          break;
        dw_out += bldlt.solve(res);
      }
      for (int b = 0; b < nblocks; ++b) {
        dS_out[b] = Rd[b];
        for (int j = 0; j < m; ++j) dS_out[b] += dw_out(j) * F[j][b];
        MatrixXd T = (Rc[b] - st.X[b] * dS_out[b]) * Sinv[b];
        dX_out[b] = 0.5 * (T + T.transpose());
      }
      if (aat_ok) {
        // Least-squares correction keeping <F_j, dX> = rp_j exact, which
        // stops the primal residual from drifting once S is ill conditioned.
        VectorXd e(m);
        for (int j = 0; j < m; ++j) e(j) = rp(j) - inner(F[j], dX_out);
        VectorXd lam = aat_ldlt.solve(e);
        for (int b = 0; b < nblocks; ++b)
          for (int j = 0; j < m; ++j) dX_out[b] += lam(j) * F[j][b];
      }
    };

    // Predictor (affine scaling).
    BlockMat Rc(nblocks);
    for (int b = 0; b < nblocks; ++b) Rc[b] = -st.X[b] * st.S[b];
    solve_direction(Rc, dwa, dSa, dXa);
    double ap = max_step(st.X, dXa);
    double ad = max_step(st.S, dSa);
    BlockMat Xa = st.X, Sa = st.S;
    axpy(Xa, ap, dXa);
    axpy(Sa, ad, dSa);
    double mu_aff = inner(Xa, Sa) / ntot;
    double sigma = std::pow(mu_aff / mu, 3);
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // Corrector.
    for (int b = 0; b < nblocks; ++b) {
      Rc[b] = -st.X[b] * st.S[b] - dXa[b] * dSa[b];
      Rc[b].diagonal().array() += sigma * mu;
    }
    solve_direction(Rc, dw, dS, dX);

    const double gamma = 0.98;
    ap = std::min(1.0, gamma * max_step(st.X, dX));
    ad = std::min(1.0, gamma * max_step(st.S, dS));
    last_ap = ap; last_ad = ad;
    // When both step lengths collapse the iterate has drifted far from the
    // central path; blending toward the mu-center restores progress while
    // keeping both matrices positive definite.
    if (std::min(ap, ad) < 0.02 && (stall >= 4 || std::max(ap, ad) < 1e-8) &&
        kicks < 6) {
      ++kicks;
      stall = 0;
      // On the central path the small eigenvalues of X sit near
      // mu / lambda_max(S) (and vice versa); flooring by that shift frees a
      // jammed iterate without a large feasibility perturbation.
      BlockMat Xk = st.X;
      for (int b = 0; b < nblocks; ++b) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> esx(st.X[b],
                                                    Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<MatrixXd> ess(st.S[b],
                                                    Eigen::EigenvaluesOnly);
        double xmax = std::max(esx.eigenvalues().maxCoeff(), 1e-300);
        double smax = std::max(ess.eigenvalues().maxCoeff(), 1e-300);
        Xk[b].diagonal().array() += mu / smax;
        st.S[b].diagonal().array() += mu / xmax;
      }
      // The diagonal shift breaks the affine constraints <F_j, X> = c_j, and
      // unlike the dual residual the primal one is not restored by the Newton
      // steps.  Project the kicked matrix back onto the constraints and keep
      // it only if it stays positive definite.
      if (aat_ok) {
        VectorXd rp_k(m);
        for (int j = 0; j < m; ++j) rp_k(j) = c(j) - inner(F[j], Xk);
        VectorXd lam = aat_ldlt.solve(rp_k);
        bool psd = true;
        for (int b = 0; b < nblocks && psd; ++b) {
          for (int j = 0; j < m; ++j) Xk[b] += lam(j) * F[j][b];
          Eigen::SelfAdjointEigenSolver<MatrixXd> es(Xk[b],
                                                     Eigen::EigenvaluesOnly);
          if (es.eigenvalues().minCoeff() <= 0) psd = false;
        }
        if (psd) st.X = std::move(Xk);
      }
      continue;
    }
    if (ap < 1e-10 && ad < 1e-10) break;

    axpy(st.X, ap, dX);
    st.w += ad * dw;
    axpy(st.S, ad, dS);
  }

  // Final cleanup: project the dual matrix onto the affine constraints
  // <F_j, X> = c_j.  If the projection stays positive semidefinite, the
  // reported lower bound is backed by an exactly feasible certificate, which
  // matters on degenerate problems where the optimal multiplier is huge (or
  // unattained) and tiny residuals would otherwise distort the bound.
  if (aat_ok) {
    VectorXd rp_best(m);
    for (int j = 0; j < m; ++j) rp_best(j) = c(j) - inner(F[j], best.X);
    VectorXd lam = aat_ldlt.solve(rp_best);
    BlockMat Xp = best.X;
    double lmin_rel = 0.0;
    for (int b = 0; b < nblocks; ++b) {
      for (int j = 0; j < m; ++j) Xp[b] += lam(j) * F[j][b];
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(Xp[b], Eigen::EigenvaluesOnly);
      double lmax = std::max(es.eigenvalues().maxCoeff(), 1e-300);
      lmin_rel = std::min(lmin_rel, es.eigenvalues().minCoeff() / lmax);
    }
    if (lmin_rel >= -1e-12) {
      best.X = Xp;
      best.dobj = -inner(F0, best.X);
      for (int j = 0; j < m; ++j) rp_best(j) = c(j) - inner(F[j], best.X);
      best.rp_rel = rp_best.lpNorm<Eigen::Infinity>() / c_norm;
      best.gap_rel = std::abs(best.pobj - best.dobj) /
                     (1.0 + std::abs(best.pobj) + std::abs(best.dobj));
      best_merit = std::max({best.rp_rel, best.rd_rel, best.gap_rel});
    }
  }

  best.status = (best_merit <= opts.accept_tol) ? SdpStatus::optimal
                                                : SdpStatus::numerical_failure;
  return unscale(best);
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts) {
  SdpSolution sol;
  ReducedLmi red = reduce(prob);
  if (red.inconsistent) {
    sol.status = SdpStatus::infeasible;
    return sol;
  }
  const int m = static_cast<int>(red.c.size());

  if (m == 0) {
    // Fully determined moments: feasibility is a plain eigenvalue check.
    sol.moment_values = red.y_part;
    sol.primal_obj = sol.dual_obj = red.offset;
    double lmin = 0.0;
    for (std::size_t b = 0; b < red.F0.size(); ++b) {
      const MatrixXd& P = red.range[b];
      sol.block_matrices.push_back(P * red.F0[b] * P.transpose());
      if (red.F0[b].rows() == 0) continue;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(red.F0[b],
                                                 Eigen::EigenvaluesOnly);
      lmin = std::min(lmin, es.eigenvalues().minCoeff());
    }
    sol.status = lmin >= -1e-7 ? SdpStatus::optimal : SdpStatus::infeasible;
    return sol;
  }

  // Drop blocks whose facial reduction removed every dimension.
  std::vector<int> live;
  std::vector<int> dims;
  BlockMat F0;
  std::vector<BlockMat> F(m);
  for (std::size_t b = 0; b < red.dims.size(); ++b) {
    if (red.dims[b] == 0) continue;
    live.push_back(static_cast<int>(b));
    dims.push_back(red.dims[b]);
    F0.push_back(red.F0[b]);
    for (int j = 0; j < m; ++j) F[j].push_back(red.F[j][b]);
  }

  IpmState st = run_ipm(dims, F0, F, red.c, opts);
  sol.status = st.status;
  sol.iterations = st.iterations;
  sol.primal_obj = st.pobj + red.offset;
  sol.dual_obj = st.dobj + red.offset;
  sol.moment_values = red.y_part + red.Z * st.w;
  // Re-embed the reduced blocks in their original dimensions.
  sol.block_matrices.assign(red.dims.size(), MatrixXd());
  sol.dual_blocks.assign(red.dims.size(), MatrixXd());
  for (std::size_t b = 0; b < red.dims.size(); ++b) {
    const MatrixXd& P = red.range[b];
    sol.block_matrices[b] = MatrixXd::Zero(P.rows(), P.rows());
    sol.dual_blocks[b] = MatrixXd::Zero(P.rows(), P.rows());
  }
  for (std::size_t i = 0; i < live.size(); ++i) {
    const MatrixXd& P = red.range[live[i]];
    sol.block_matrices[live[i]] = P * st.S[i] * P.transpose();
    sol.dual_blocks[live[i]] = P * st.X[i] * P.transpose();
  }
  sol.primal_residual = st.rp_rel;
  sol.dual_residual = st.rd_rel;
  sol.gap = st.gap_rel;
  return sol;
}

KktReport verify_kkt(const SdpProblem& prob, const SdpSolution& sol) {
  KktReport rep;
  const VectorXd& y = sol.moment_values;
  for (std::size_t r = 0; r < prob.eq_rows.size(); ++r) {
    double v = -prob.eq_rhs[r];
    double scale = std::abs(prob.eq_rhs[r]);
    for (const auto& [i, c] : prob.eq_rows[r].terms) {
      v += c * y(i);
      scale = std::max(scale, std::abs(c));
    }
    rep.eq_residual_inf = std::max(rep.eq_residual_inf,
                                   std::abs(v) / std::max(1.0, scale));
  }
  rep.min_block_eigenvalue = 0.0;
  for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
    const auto& blk = prob.blocks[b];
    MatrixXd Sb = MatrixXd::Zero(blk.dim, blk.dim);
    for (const auto& [i, j, form] : blk.entries) {
      double v = 0.0;
      for (const auto& [mi, c] : form.terms) v += c * y(mi);
      Sb(i, j) = v;
      Sb(j, i) = v;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sb, Eigen::EigenvaluesOnly);
    rep.min_block_eigenvalue =
        std::min(rep.min_block_eigenvalue, es.eigenvalues().minCoeff());
    if (b < sol.dual_blocks.size()) {
      rep.complementarity += (sol.dual_blocks[b].array() * Sb.array()).sum();
      rep.scale = std::max(rep.scale, sol.dual_blocks[b].norm() * Sb.norm());
    }
  }
  return rep;
}

Eigen::MatrixXd moment_matrix(const SdpProblem& prob,
                              const Eigen::VectorXd& moment_values, int d) {
  const std::size_t n = prob.basis.count_up_to(d);
  MatrixXd M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      int idx =
          prob.moment_index(prob.basis.monos[i].times(prob.basis.monos[j]));
      M(i, j) = M(j, i) = moment_values(idx);
    }
  return M;
}

}  // namespace convin
