#include "convin/trajopt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace convin {

namespace {
using Eigen::MatrixXd;
using Eigen::VectorXd;
}  // namespace

BSplineBasis BSplineBasis::clamped_uniform(int segments, int degree, double t0,
                                           double tf) {
  if (segments < 1 || degree < 1 || !(tf > t0))
    throw std::invalid_argument("bad B-spline parameters");
  BSplineBasis b;
  b.segments = segments;
  b.degree = degree;
  b.t0 = t0;
  b.tf = tf;
  b.knots.assign(degree, t0);
  for (int i = 0; i <= segments; ++i)
    b.knots.push_back(t0 + (tf - t0) * i / segments);
  b.knots.insert(b.knots.end(), degree, tf);
  return b;
}

BSplineBasis BSplineBasis::clamped(int degree, double t0, double tf,
                                   const std::vector<double>& fractions) {
  if (degree < 1 || !(tf > t0))
    throw std::invalid_argument("bad B-spline parameters");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double lo = i == 0 ? 0.0 : fractions[i - 1];
    if (!(fractions[i] > lo) || !(fractions[i] < 1.0))
      throw std::invalid_argument("interior knot fractions must be strictly "
                                  "increasing inside (0, 1)");
  }
  BSplineBasis b;
  b.segments = static_cast<int>(fractions.size()) + 1;
  b.degree = degree;
  b.t0 = t0;
  b.tf = tf;
  b.knots.assign(degree + 1, t0);
  for (double f : fractions) b.knots.push_back(t0 + (tf - t0) * f);
  b.knots.insert(b.knots.end(), degree + 1, tf);
  return b;
}

namespace {

// Cox-de Boor value of N_{k,d}; 0/0 conventions resolved to 0. The last
// basis function is extended right-continuously so the closed endpoint tf
// evaluates to 1 there.
double coxdeboor(const std::vector<double>& u, int k, int d, double t,
                 double tf) {
  if (d == 0) {
    if (u[k] <= t && t < u[k + 1]) return 1.0;
    if (t == tf && u[k] < u[k + 1] && u[k + 1] == tf) return 1.0;
    return 0.0;
  }
  double left = 0.0, right = 0.0;
  double dl = u[k + d] - u[k];
  if (dl > 0) left = (t - u[k]) / dl * coxdeboor(u, k, d - 1, t, tf);
  double dr = u[k + d + 1] - u[k + 1];
  if (dr > 0)
    right = (u[k + d + 1] - t) / dr * coxdeboor(u, k + 1, d - 1, t, tf);
  return left + right;
}

// Derivative recursion: N'_{k,d} = d/(u_{k+d}-u_k) N_{k,d-1}
//                                - d/(u_{k+d+1}-u_{k+1}) N_{k+1,d-1}.
double coxdeboor_deriv(const std::vector<double>& u, int k, int d, double t,
                       double tf, int deriv) {
  if (deriv == 0) return coxdeboor(u, k, d, t, tf);
  if (d == 0) return 0.0;
  double left = 0.0, right = 0.0;
  double dl = u[k + d] - u[k];
  if (dl > 0) left = d / dl * coxdeboor_deriv(u, k, d - 1, t, tf, deriv - 1);
  double dr = u[k + d + 1] - u[k + 1];
  if (dr > 0)
    right = d / dr * coxdeboor_deriv(u, k + 1, d - 1, t, tf, deriv - 1);
  return left - right;
}

}  // namespace

double BSplineBasis::basis(int k, double t, int deriv) const {
  if (k < 0 || k >= size()) throw std::out_of_range("basis index");
  if (t < t0 || t > tf) throw std::domain_error("t outside spline window");
  if (deriv < 0 || deriv > 2) throw std::invalid_argument("deriv must be 0-2");
  return coxdeboor_deriv(knots, k, degree, t, tf, deriv);
}

double bspline_eval(const BSplineBasis& basis,
                    const std::vector<double>& alpha, double t, int deriv) {
  if (static_cast<int>(alpha.size()) != basis.size())
    throw std::invalid_argument("coefficient count mismatch");
  double v = 0.0;
  for (int k = 0; k < basis.size(); ++k)
    v += alpha[k] * basis.basis(k, t, deriv);
  return v;
}

FlatProgram build_flat_program(const std::vector<double>& x0,
                               const std::vector<double>& xf, double t0,
                               double tf, int N,
                               const SemialgebraicSet& constraint_set) {
  if (x0.size() != 2 || xf.size() != 2)
    throw std::invalid_argument("boundary states must be 2-dimensional");
  if (constraint_set.n != 2)
    throw std::invalid_argument("constraint set must be over (x1, x2)");
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (!membership(constraint_set, x0) || !membership(constraint_set, xf))
    throw std::invalid_argument("boundary state outside the constraint set");
  FlatProgram fp;
  // Five cubic segments with the interior knots pushed towards the ends:
  // the boundary states force rapid turning near t0 and tf while the middle
  // of the trajectory crawls through the narrow neck of the constraint set,
  // so extra flexibility at the ends is what tight instantiations need.
  fp.basis = BSplineBasis::clamped(3, t0, tf, {0.1, 0.3, 0.7, 0.9});
  fp.x0 = x0;
  fp.xf = xf;
  fp.set = constraint_set;
  fp.times.resize(N);
  for (int i = 1; i <= N; ++i)
    fp.times[i - 1] = t0 + (tf - t0) * i / (N + 1);
  return fp;
}

namespace {

struct Transcription {
  MatrixXd A1, A2, U;      // rows: x1, x2, u at each instant (w.r.t. alpha)
  VectorXd alpha_p;        // particular solution of the boundary equalities
  MatrixXd Z;              // orthonormal null-space basis of the equalities
  double weight = 1.0;     // cost weight per instant
  std::vector<Polynomial> ineqs;
  std::vector<std::array<Polynomial, 2>> grads;
  std::vector<std::array<Polynomial, 3>> hessians;  // xx, xy, yy
};

Transcription transcribe(const FlatProgram& fp) {
  const int nb = fp.basis.size();
  const int N = static_cast<int>(fp.times.size());
  Transcription tr;
  tr.A1.resize(N, nb);
  tr.A2.resize(N, nb);
  tr.U.resize(N, nb);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < nb; ++k) {
      tr.A1(i, k) = fp.basis.basis(k, fp.times[i], 0);
      tr.A2(i, k) = fp.basis.basis(k, fp.times[i], 1);
      tr.U(i, k) = fp.basis.basis(k, fp.times[i], 2);
    }

  MatrixXd E(4, nb);
  VectorXd e(4);
  for (int k = 0; k < nb; ++k) {
    E(0, k) = fp.basis.basis(k, fp.basis.t0, 0);
    E(1, k) = fp.basis.basis(k, fp.basis.t0, 1);
    E(2, k) = fp.basis.basis(k, fp.basis.tf, 0);
    E(3, k) = fp.basis.basis(k, fp.basis.tf, 1);
  }
  e << fp.x0[0], fp.x0[1], fp.xf[0], fp.xf[1];
  Eigen::JacobiSVD<MatrixXd> svd(E, Eigen::ComputeFullV | Eigen::ComputeThinU);
  tr.alpha_p = svd.solve(e);
  const int rank = static_cast<int>(svd.rank());
  tr.Z = svd.matrixV().rightCols(nb - rank);

  tr.weight = fp.cost == CostConvention::dt_weighted
                  ? (fp.basis.tf - fp.basis.t0) / (N + 1)
                  : 1.0;

  tr.ineqs = fp.set.ineqs;
  for (const auto& p : tr.ineqs) {
    tr.grads.push_back({p.diff(0), p.diff(1)});
    tr.hessians.push_back(
        {p.diff(0).diff(0), p.diff(0).diff(1), p.diff(1).diff(1)});
  }
  return tr;
}

struct Evals {
  double cost = 0.0;
  double max_violation = -std::numeric_limits<double>::infinity();
};

Evals evaluate(const Transcription& tr, const VectorXd& alpha) {
  Evals ev;
  VectorXd x1 = tr.A1 * alpha, x2 = tr.A2 * alpha, u = tr.U * alpha;
  ev.cost = tr.weight * u.squaredNorm();
  for (int i = 0; i < x1.size(); ++i) {
    std::vector<double> x{x1(i), x2(i)};
    for (const auto& p : tr.ineqs)
      ev.max_violation = std::max(ev.max_violation, p.eval(x));
  }
  return ev;
}

// Phase-1 barrier: minimize the worst violation s subject to p_j(x_i) <= s
// via s - mu * sum log(s - p).  Succeeds as soon as a point with all
// p < -margin is reached; handles feasible sets with very small interior
// margins where penalty methods stall.
bool restore_feasibility(const Transcription& tr, VectorXd& z, double margin) {
  const int nz = static_cast<int>(z.size());
  MatrixXd G1 = tr.A1 * tr.Z, G2 = tr.A2 * tr.Z;

  auto violations = [&](const VectorXd& zz, std::vector<double>* vals) {
    VectorXd alpha = tr.alpha_p + tr.Z * zz;
    VectorXd x1 = tr.A1 * alpha, x2 = tr.A2 * alpha;
    double worst = -std::numeric_limits<double>::infinity();
    if (vals) vals->clear();
    for (int i = 0; i < x1.size(); ++i) {
      std::vector<double> x{x1(i), x2(i)};
      for (const auto& p : tr.ineqs) {
        double v = p.eval(x);
        worst = std::max(worst, v);
        if (vals) vals->push_back(v);
      }
    }
    return worst;
  };

  double worst = violations(z, nullptr);
  if (worst < -margin) return true;
  double s = worst + 1.0;
  for (double mu = 1.0; mu > 1e-12; mu *= 0.2) {
    for (int inner = 0; inner < 60; ++inner) {
      VectorXd alpha = tr.alpha_p + tr.Z * z;
      VectorXd x1 = tr.A1 * alpha, x2 = tr.A2 * alpha;
      VectorXd gz = VectorXd::Zero(nz);
      MatrixXd Hzz = MatrixXd::Zero(nz, nz);
      VectorXd Hzs = VectorXd::Zero(nz);
      double gs = 1.0, Hss = 0.0;
      worst = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < x1.size(); ++i) {
        std::vector<double> x{x1(i), x2(i)};
        for (std::size_t j = 0; j < tr.ineqs.size(); ++j) {
          double v = tr.ineqs[j].eval(x);
          worst = std::max(worst, v);
          double r = s - v;
          VectorXd g = tr.grads[j][0].eval(x) * G1.row(i).transpose() +
                       tr.grads[j][1].eval(x) * G2.row(i).transpose();
          double hxx = tr.hessians[j][0].eval(x);
          double hxy = tr.hessians[j][1].eval(x);
          double hyy = tr.hessians[j][2].eval(x);
          MatrixXd Hp = hxx * G1.row(i).transpose() * G1.row(i) +
                        hxy * (G1.row(i).transpose() * G2.row(i) +
                               G2.row(i).transpose() * G1.row(i)) +
                        hyy * G2.row(i).transpose() * G2.row(i);
          gz += mu / r * g;
          gs -= mu / r;
          Hzz += mu / (r * r) * g * g.transpose() + mu / r * Hp;
          Hzs -= mu / (r * r) * g;
          Hss += mu / (r * r);
        }
      }
      if (worst < -margin) return true;
      MatrixXd H(nz + 1, nz + 1);
      H.topLeftCorner(nz, nz) = Hzz;
      H.topRightCorner(nz, 1) = Hzs;
      H.bottomLeftCorner(1, nz) = Hzs.transpose();
      H(nz, nz) = Hss;
      VectorXd grad(nz + 1);
      grad.head(nz) = gz;
      grad(nz) = gs;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
      double lmin = es.eigenvalues().minCoeff();
      if (lmin < 1e-12) H.diagonal().array() += 1e-12 - lmin;
      VectorXd d = -H.ldlt().solve(grad);
      if (d.norm() < 1e-14) break;
      // Backtrack keeping s - p positive everywhere.
      double step = 1.0;
      bool moved = false;
      std::vector<double> vals;
      double phi0 = s;
      violations(z, &vals);
      for (double v : vals) phi0 -= mu * std::log(s - v);
      for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
        VectorXd zt = z + step * d.head(nz);
        double st = s + step * d(nz);
        double wt = violations(zt, &vals);
        if (st - wt <= 0) continue;
        double phit = st;
        for (double v : vals) phit -= mu * std::log(st - v);
        if (phit <= phi0 - 1e-4 * step * grad.dot(-d)) {
          z = zt;
          s = st;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (violations(z, nullptr) < -margin) return true;
  }
  return violations(z, nullptr) < -margin;
}

struct BarrierResult {
  VectorXd z;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on J(z) - mu * sum log(-p); iterates stay strictly feasible.
BarrierResult barrier_solve(const Transcription& tr, VectorXd z,
                            int max_iters) {
  const int nz = static_cast<int>(z.size());
  MatrixXd G1 = tr.A1 * tr.Z, G2 = tr.A2 * tr.Z, GU = tr.U * tr.Z;
  VectorXd u_p = tr.U * tr.alpha_p;
  MatrixXd Q = 2.0 * tr.weight * GU.transpose() * GU;
  VectorXd q = 2.0 * tr.weight * GU.transpose() * u_p;

  auto barrier = [&](const VectorXd& zz, bool* feasible) {
    VectorXd alpha = tr.alpha_p + tr.Z * zz;
    VectorXd x1 = tr.A1 * alpha, x2 = tr.A2 * alpha, u = tr.U * alpha;
    double logs = 0.0;
    *feasible = true;
    for (int i = 0; i < x1.size() && *feasible; ++i) {
      std::vector<double> x{x1(i), x2(i)};
      for (const auto& p : tr.ineqs) {
        double v = p.eval(x);
        if (v >= 0) {
          *feasible = false;
          break;
        }
        logs += std::log(-v);
      }
    }
    return std::pair<double, double>(tr.weight * u.squaredNorm(), logs);
  };

  BarrierResult res;
  bool feas = false;
  auto [J0, logs0] = barrier(z, &feas);
  if (!feas) return res;
  double mu = std::max(1e-3, 0.1 * (1.0 + std::abs(J0)) /
                                  static_cast<double>(tr.A1.rows()));
  int iters = 0;
  for (; mu > 1e-10 && iters < max_iters; mu *= 0.2) {
    for (int inner = 0; inner < 50 && iters < max_iters; ++inner, ++iters) {
      VectorXd alpha = tr.alpha_p + tr.Z * z;
      VectorXd x1 = tr.A1 * alpha, x2 = tr.A2 * alpha;
      VectorXd grad = Q * z + q;
      MatrixXd hess = Q;
      for (int i = 0; i < x1.size(); ++i) {
        std::vector<double> x{x1(i), x2(i)};
        for (std::size_t j = 0; j < tr.ineqs.size(); ++j) {
          double v = tr.ineqs[j].eval(x);
          VectorXd g = tr.grads[j][0].eval(x) * G1.row(i).transpose() +
                       tr.grads[j][1].eval(x) * G2.row(i).transpose();
          double hxx = tr.hessians[j][0].eval(x);
          double hxy = tr.hessians[j][1].eval(x);
          double hyy = tr.hessians[j][2].eval(x);
          MatrixXd Hp =
              hxx * G1.row(i).transpose() * G1.row(i) +
              hxy * (G1.row(i).transpose() * G2.row(i) +
                     G2.row(i).transpose() * G1.row(i)) +
              hyy * G2.row(i).transpose() * G2.row(i);
          grad += -mu / v * g;
          hess += mu / (v * v) * g * g.transpose() - mu / v * Hp;
        }
      }
      // Levenberg regularization keeps the step a descent direction when the
      // pulled-back constraint Hessians are indefinite.
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(hess);
      double lmin = es.eigenvalues().minCoeff();
      if (lmin < 1e-10) hess.diagonal().array() += 1e-10 - lmin;
      VectorXd dz = -hess.ldlt().solve(grad);
      double lambda2 = -grad.dot(dz);
      if (lambda2 / 2 < 1e-12) break;
      bool ok = false;
      auto [f0, l0] = barrier(z, &feas);
      double phi0 = f0 - mu * l0;
      double step = 1.0;
      for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
        VectorXd zt = z + step * dz;
        auto [ft, lt] = barrier(zt, &feas);
        if (!feas) continue;
        if (ft - mu * lt <= phi0 - 1e-4 * step * lambda2) {
          z = zt;
          ok = true;
          break;
        }
      }
      if (!ok) break;
    }
  }
  res.z = z;
  res.iterations = iters;
  res.converged = mu <= 1e-10 || iters < max_iters;
  return res;
}

}  // namespace

TrajectoryResult solve_flat_program(const FlatProgram& fp,
                                    const TrajOptions& opts) {
  auto t_start = std::chrono::steady_clock::now();
  Transcription tr = transcribe(fp);
  const int nz = static_cast<int>(tr.Z.cols());
  const int N = static_cast<int>(fp.times.size());

  // Straight-line initialization: least-squares fit of the linear
  // interpolant between the boundary positions, restricted to the
  // boundary-feasible affine subspace.
  VectorXd target(N);
  for (int i = 0; i < N; ++i) {
    double s = (fp.times[i] - fp.basis.t0) / (fp.basis.tf - fp.basis.t0);
    target(i) = (1 - s) * fp.x0[0] + s * fp.xf[0];
  }
  MatrixXd G1 = tr.A1 * tr.Z;
  VectorXd z0 = (G1.transpose() * G1 +
                 1e-12 * MatrixXd::Identity(nz, nz))
                    .ldlt()
                    .solve(G1.transpose() * (target - tr.A1 * tr.alpha_p));

  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> noise(0.0, opts.perturbation);

  // The feasible tube in coefficient space can be narrow (constraint sets
  // with necks), so local restoration from one point is not reliable.  A
  // deterministic coarse search around the straight-line fit ranks candidate
  // starting points by worst violation; restoration then runs from the best
  // ones until it lands strictly inside.
  auto find_feasible = [&](VectorXd z) -> std::optional<VectorXd> {
    VectorXd zf = z;
    if (restore_feasibility(tr, zf, 1e-8)) return zf;
    std::mt19937 search_rng(12345);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, VectorXd>> ranked;
    for (double scale : {0.25, 0.5, 1.0, 2.0})
      for (int s = 0; s < 500; ++s) {
        VectorXd zc = z;
        for (int i = 0; i < nz; ++i) zc(i) += scale * unit(search_rng);
        Evals ev = evaluate(tr, tr.alpha_p + tr.Z * zc);
        ranked.emplace_back(ev.max_violation, zc);
      }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < ranked.size() && i < 10; ++i) {
      zf = ranked[i].second;
      if (restore_feasibility(tr, zf, 1e-8)) return zf;
    }
    return std::nullopt;
  };

  TrajectoryResult best;
  best.cost = std::numeric_limits<double>::infinity();
  const int starts = opts.multistart ? std::max(1, opts.starts) : 1;
  int total_iters = 0;
  for (int s = 0; s < starts; ++s) {
    VectorXd z = z0;
    if (s > 0)
      for (int i = 0; i < nz; ++i) z(i) += noise(rng);
    auto zf = find_feasible(z);
    if (!zf) continue;
    z = *zf;
    BarrierResult br = barrier_solve(tr, z, opts.max_newton_iters);
    total_iters += br.iterations;
    if (br.z.size() == 0) continue;
    VectorXd alpha = tr.alpha_p + tr.Z * br.z;
    Evals ev = evaluate(tr, alpha);
    if (ev.cost < best.cost) {
      best.alpha.assign(alpha.data(), alpha.data() + alpha.size());
      best.cost = ev.cost;
      best.max_violation = ev.max_violation;
      best.converged = br.converged;
    }
  }
  best.iterations = total_iters;
  if (!std::isfinite(best.cost))
    throw std::runtime_error("all trajectory starts failed to find a "
                             "feasible interior point");
  best.wall_time = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return best;
}

std::string trajectory_csv(const FlatProgram& fp,
                           const std::vector<double>& alpha, int samples) {
  std::ostringstream os;
  os << "t,x1,x2,u\n";
  for (int i = 0; i <= samples; ++i) {
    double t = fp.basis.t0 + (fp.basis.tf - fp.basis.t0) * i / samples;
    os << t << ',' << bspline_eval(fp.basis, alpha, t, 0) << ','
       << bspline_eval(fp.basis, alpha, t, 1) << ','
       << bspline_eval(fp.basis, alpha, t, 2) << '\n';
  }
  return os.str();
}

}  // namespace convin
