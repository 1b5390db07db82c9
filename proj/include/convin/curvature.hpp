#pragma once

#include <optional>
#include <vector>

#include "convin/polynomial.hpp"
#include "convin/semialg.hpp"

namespace convin {

// Polynomial optimization problem: minimize `objective` subject to
// eqs[i] == 0 and ineqs[i] <= 0, all over the same ring of `vars` variables.
struct PolyOptProblem {
  int vars = 0;
  Polynomial objective;
  PolyVector eqs;
  PolyVector ineqs;
};

// Curvature certification problem for boundary piece i of S (0-based):
//
//   min  y' H_i(x) y
//   s.t. p_i(x) = 0,  y' g_i(x) = 0,  y'y = 1,
//        p_j(x) <= 0 for j != i (plus the ball constraint if S has one).
//
// Variables are ordered (x_1..x_n, y_1..y_n) in a single 2n-variable ring.
// A negative optimum exhibits a negatively curved boundary neighborhood;
// a nonnegative optimum on every piece certifies convexity of S.
PolyOptProblem build_curvature_problem(const SemialgebraicSet& S, int i);

// Same construction for an explicit boundary polynomial `piece` with side
// constraints `others` (<= 0 each). Used for pieces that are not stored in
// a set, e.g. re-oriented boundary surfaces.
PolyOptProblem build_curvature_problem(const Polynomial& piece,
                                       const PolyVector& others);

struct NondegeneracyReport {
  enum class Status { holds, violated, unknown };
  Status status = Status::unknown;
  std::vector<double> witness;  // common zero of p_i and g_i when violated
};

// Decides whether p_i and its gradient vanish simultaneously somewhere on
// the feasible side of the other constraints, via certification of the
// feasibility system { p_i = 0, g_i = 0, p_j <= 0 }.
NondegeneracyReport check_assumption_nondegenerate(const SemialgebraicSet& S,
                                                   int i, int max_order);

}  // namespace convin
