#pragma once

#include <string>
#include <vector>

#include "convin/semialg.hpp"

namespace convin {

// Clamped B-spline basis with uniform interior knots. For degree d and m
// segments there are m + d basis functions; the clamped ends repeat the
// boundary knots d + 1 times so f(t0) and f(tf) depend only on the first and
// last coefficient.
struct BSplineBasis {
  int segments = 5;
  int degree = 3;
  double t0 = 0.0;
  double tf = 1.0;
  std::vector<double> knots;  // full clamped knot vector

  static BSplineBasis clamped_uniform(int segments, int degree, double t0,
                                      double tf);
  // Clamped basis with interior knots at the given fractions of [t0, tf]
  // (strictly increasing, in (0, 1)); the number of segments is
  // fractions.size() + 1.
  static BSplineBasis clamped(int degree, double t0, double tf,
                              const std::vector<double>& interior_fractions);

  int size() const { return segments + degree; }
  // Value of the k-th basis function or one of its first two derivatives.
  double basis(int k, double t, int deriv) const;
};

// f^(deriv)(t) with f(t) = sum_k alpha_k b_k(t); deriv in {0, 1, 2}.
double bspline_eval(const BSplineBasis& basis,
                    const std::vector<double>& alpha, double t, int deriv);

// Which discrete transcription of the continuous energy integral u^2 is
// used: the plain sum over the constraint instants, or the sum weighted by
// the spacing dt (a rectangle rule for the integral).
enum class CostConvention { plain_sum, dt_weighted };

// Flat-output program for the double integrator: state x = (f, f'),
// control u = f''. Boundary states pinned exactly, path constraints
// p_j(x(t_i)) <= 0 enforced at N uniformly spaced interior instants.
struct FlatProgram {
  BSplineBasis basis;
  std::vector<double> x0, xf;
  SemialgebraicSet set;        // constraint set over (x1, x2)
  std::vector<double> times;   // interior constraint instants, size N
  CostConvention cost = CostConvention::dt_weighted;
};

FlatProgram build_flat_program(const std::vector<double>& x0,
                               const std::vector<double>& xf, double t0,
                               double tf, int N,
                               const SemialgebraicSet& constraint_set);

struct TrajOptions {
  bool multistart = false;  // perturbed restarts for nonconvex sets
  int starts = 5;
  unsigned seed = 0;
  double perturbation = 0.5;  // std-dev of the coefficient perturbations
  int max_newton_iters = 200;
};

struct TrajectoryResult {
  std::vector<double> alpha;
  double cost = 0.0;
  double max_violation = 0.0;  // max p_j over the constraint instants
  int iterations = 0;
  double wall_time = 0.0;  // seconds
  bool converged = false;
};

// Interior-point solve in the coefficient space; equality constraints are
// eliminated exactly, path constraints handled by a logarithmic barrier with
// a feasibility-restoration phase for infeasible initializations.
TrajectoryResult solve_flat_program(const FlatProgram& fp,
                                    const TrajOptions& opts = {});

// CSV rows "t,x1,x2,u" sampled uniformly (samples + 1 rows).
std::string trajectory_csv(const FlatProgram& fp,
                           const std::vector<double>& alpha, int samples);

}  // namespace convin
