#pragma once

#include <array>
#include <vector>

#include "convin/curvature.hpp"
#include "convin/semialg.hpp"

namespace convin {

enum class StabilityKind { schur3, schur4 };

// Discrete-time stability region in controller-parameter space, together
// with the map back to characteristic-polynomial coefficients used by the
// independent root-radius verification.
struct StabilityRegionSpec {
  StabilityKind kind = StabilityKind::schur3;
  double a = 0.0;  // closed-loop plant parameter (schur4 only)
  SemialgebraicSet set;

  // Monic characteristic polynomial at parameter point x, coefficients in
  // increasing degree (constant term first, leading 1 last).
  std::vector<double> char_poly(const std::vector<double>& x) const;
};

// Degree-3 Schur region: parameters (x1, x2, x3) of z^3 + x3 z^2 + x2 z + x1
// with the two facet planes and the hyperbolic-paraboloid boundary piece.
StabilityRegionSpec schur3_region();

// Fourth-order closed-loop family: controller parameters (x1, x2) of the
// characteristic polynomial z^4 + 2(1-x1)z^3 + (1-2x2)z^2 + (a+x1)z + a+x2,
// with five affine inequalities and one cubic inequality.
StabilityRegionSpec schur4_region(double a);

// Curvature problem for the saddle boundary piece of the schur3 region,
// oriented so the quadratic surface bounds the region from outside; the
// optimum is -(1+sqrt(2)) attained along the parabola
// sqrt(2) x1^2 - x2 + 1 = 0. A ball constraint compactifies the otherwise
// unbounded minimizer arc.
PolyOptProblem schur3_saddle_problem(double ball_radius = 2.0);

struct AnalyticCenterResult {
  std::vector<double> x_star;
  double gradient_norm = 0.0;
  double barrier_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on the logarithmic barrier f(x) = -sum log(-p_i(x)),
// starting from a strictly feasible x0; iterates stay strictly feasible.
// Throws if x0 is infeasible; returns best iterate if not converged.
AnalyticCenterResult analytic_center(const SemialgebraicSet& S,
                                     std::vector<double> x0,
                                     int max_iters = 500,
                                     double grad_tol = 1e-8);

// Largest root modulus of a monic polynomial given by its coefficients in
// increasing degree (companion-matrix eigenvalues).
double spectral_radius(const std::vector<double>& coeffs);

struct StabilitySampleReport {
  std::size_t checked = 0;     // raster points inside the region
  std::size_t violations = 0;  // inside points with root radius >= 1
  std::size_t marginal = 0;    // inside points with radius within 1e-9 of 1
  std::vector<std::vector<double>> violating_points;
};

// Rasterizes `region` over bbox and checks that every inside point maps to
// a Schur-stable characteristic polynomial under spec's coefficient map.
StabilitySampleReport verify_stability_sampling(
    const StabilityRegionSpec& spec, const SemialgebraicSet& region,
    const std::vector<std::array<double, 2>>& bbox,
    const std::vector<int>& resolution);

}  // namespace convin
