#include "convin/stability.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace convin {

namespace {

Polynomial affine(int n, const std::vector<double>& coef, double constant) {
  Polynomial p(n);
  for (int j = 0; j < n; ++j) p.add_term(Monomial::variable(n, j), coef[j]);
  return p.plus_constant(constant);
}

}  // namespace

std::vector<double> StabilityRegionSpec::char_poly(
    const std::vector<double>& x) const {
  if (kind == StabilityKind::schur3) {
    // z^3 + x3 z^2 + x2 z + x1
    return {x[0], x[1], x[2], 1.0};
  }
  // z^4 + 2(1-x1) z^3 + (1-2x2) z^2 + (a+x1) z + a + x2
  return {a + x[1], a + x[0], 1.0 - 2.0 * x[1], 2.0 * (1.0 - x[0]), 1.0};
}

StabilityRegionSpec schur3_region() {
  StabilityRegionSpec spec;
  spec.kind = StabilityKind::schur3;
  spec.set.n = 3;
  spec.set.ineqs.push_back(affine(3, {-1, -1, -1}, -1.0));  // -x1-x2-x3-1
  spec.set.ineqs.push_back(affine(3, {1, -1, 1}, -1.0));    // x1-x2+x3-1
  Polynomial p3(3);                                         // x1^2-x1x3+x2-1
  p3.add_term(Monomial({2, 0, 0}), 1.0);
  p3.add_term(Monomial({1, 0, 1}), -1.0);
  p3.add_term(Monomial({0, 1, 0}), 1.0);
  p3.add_term(Monomial({0, 0, 0}), -1.0);
  spec.set.ineqs.push_back(p3);
  return spec;
}

StabilityRegionSpec schur4_region(double a) {
  StabilityRegionSpec spec;
  spec.kind = StabilityKind::schur4;
  spec.a = a;
  spec.set.n = 2;

  // Characteristic coefficients q_0..q_4 as affine functions of (x1, x2).
  // Row k of the coefficient table holds (dq_k/dx1, dq_k/dx2, constant).
  const double q[5][3] = {{0, 1, a},   // q0 = a + x2
                          {1, 0, a},   // q1 = a + x1
                          {0, -2, 1},  // q2 = 1 - 2 x2
                          {-2, 0, 2},  // q3 = 2 (1 - x1)
                          {0, 0, 1}};  // q4 = 1
  const double T[5][5] = {{-1, 1, -1, 1, -1},
                          {4, -2, 0, 2, -4},
                          {-6, 0, 2, 0, -6},
                          {4, 2, 0, -2, -4},
                          {-1, -1, -1, -1, -1}};

  PolyVector p;
  for (int r = 0; r < 5; ++r) {
    double c1 = 0, c2 = 0, c0 = 0;
    for (int k = 0; k < 5; ++k) {
      c1 += T[r][k] * q[k][0];
      c2 += T[r][k] * q[k][1];
      c0 += T[r][k] * q[k][2];
    }
    p.push_back(affine(2, {c1, c2}, c0));
  }

  // The cubic Jury condition. The paper-normalized combination
  // p2*p3*p4 - p2^2*p5 - p1*p4^2 carries a factor of 64 relative to the
  // canonical cubic, so it is rescaled here; for a = 0 this reproduces
  // 6x1^2x2 + 3x1^2 - 10x1x2 - 2x1 - 3x2^3 + 6x2^2 + x2 exactly.
  Polynomial p6 = (p[1] * p[2] * p[3] - p[1] * p[1] * p[4] -
                   p[0] * p[3] * p[3])
                      .scaled(1.0 / 64.0);

  spec.set.ineqs = std::move(p);
  spec.set.ineqs.push_back(p6);
  return spec;
}

PolyOptProblem schur3_saddle_problem(double ball_radius) {
  StabilityRegionSpec spec = schur3_region();
  // Reversed orientation of the hyperbolic paraboloid: the region lies on
  // the concave side of the surface, so the saddle curvature problem uses
  // the piece -p3 together with the two facet planes.
  Polynomial piece = -spec.set.ineqs[2];
  PolyVector others{spec.set.ineqs[0], spec.set.ineqs[1]};
  Polynomial ball(3);
  for (int j = 0; j < 3; ++j) {
    Monomial m = Monomial::variable(3, j);
    ball.add_term(m.times(m), 1.0);
  }
  others.push_back(ball.plus_constant(-ball_radius * ball_radius));
  return build_curvature_problem(piece, others);
}

AnalyticCenterResult analytic_center(const SemialgebraicSet& S,
                                     std::vector<double> x0, int max_iters,
                                     double grad_tol) {
  const int n = S.n;
  for (const auto& p : S.ineqs)
    if (p.eval(x0) >= 0)
      throw std::invalid_argument("analytic_center: x0 is not strictly feasible");

  std::vector<PolyVector> grads;
  std::vector<PolyMatrix> hessians;
  for (const auto& p : S.ineqs) {
    grads.push_back(gradient(p));
    hessians.push_back(hessian(p));
  }

  auto barrier = [&](const std::vector<double>& x) {
    double f = 0.0;
    for (const auto& p : S.ineqs) {
      double v = -p.eval(x);
      if (v <= 0) return std::numeric_limits<double>::infinity();
      f -= std::log(v);
    }
    return f;
  };

  AnalyticCenterResult res;
  std::vector<double> x = std::move(x0);

  for (int iter = 0; iter < max_iters; ++iter) {
    res.iterations = iter;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < S.ineqs.size(); ++i) {
      double s = -S.ineqs[i].eval(x);
      Eigen::VectorXd gp(n);
      for (int j = 0; j < n; ++j) gp(j) = grads[i][j].eval(x);
      g += gp / s;
      H += gp * gp.transpose() / (s * s);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) H(j, k) += hessians[i][j][k].eval(x) / s;
    }

    res.gradient_norm = g.norm();
    if (res.gradient_norm <= grad_tol) {
      res.converged = true;
      break;
    }

    // Positive-definite modification for the nonconvex barrier terms.
    Eigen::LLT<Eigen::MatrixXd> llt;
    double ridge = 0.0;
    for (;;) {
      Eigen::MatrixXd Hm = H;
      if (ridge > 0) Hm.diagonal().array() += ridge;
      llt.compute(Hm);
      if (llt.info() == Eigen::Success) break;
      ridge = ridge == 0.0 ? 1e-10 * (1.0 + H.trace() / n) : ridge * 10.0;
    }
    Eigen::VectorXd dx = -llt.solve(g);

    double f0 = barrier(x);
    double step = 1.0;
    std::vector<double> xn(n);
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      for (int j = 0; j < n; ++j) xn[j] = x[j] + step * dx(j);
      double fn = barrier(xn);
      if (fn <= f0 + 1e-4 * step * g.dot(dx)) {  // Armijo decrease
        x = xn;
        break;
      }
      if (bt == 59) step = 0.0;
    }
    if (step == 0.0) break;  // no progress possible
  }

  res.x_star = x;
  res.barrier_value = barrier(x);
  return res;
}

double spectral_radius(const std::vector<double>& coeffs) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg <= 0) return 0.0;
  const double lead = coeffs.back();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -coeffs[i] / lead;
  return C.eigenvalues().cwiseAbs().maxCoeff();
}

StabilitySampleReport verify_stability_sampling(
    const StabilityRegionSpec& spec, const SemialgebraicSet& region,
    const std::vector<std::array<double, 2>>& bbox,
    const std::vector<int>& resolution) {
  StabilitySampleReport rep;
  RegionRaster r = rasterize(region, bbox, resolution);

  std::vector<int> idx(bbox.size(), 0);
  const std::size_t total = r.cells();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int ax = static_cast<int>(bbox.size()) - 1; ax >= 0; --ax) {
      idx[ax] = static_cast<int>(rem % resolution[ax]);
      rem /= resolution[ax];
    }
    if (!r.mask[flat]) continue;
    ++rep.checked;
    std::vector<double> x = r.gridpoint(idx);
    double radius = spectral_radius(spec.char_poly(x));
    if (std::abs(radius - 1.0) <= 1e-9) {
      ++rep.marginal;
    } else if (radius > 1.0) {
      ++rep.violations;
      if (rep.violating_points.size() < 32) rep.violating_points.push_back(x);
    }
  }
  return rep;
}

}  // namespace convin
