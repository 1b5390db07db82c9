#pragma once

#include <string>
#include <vector>

#include "convin/extract.hpp"
#include "convin/semialg.hpp"

namespace convin {

// Which minimizers of a certified-negative curvature problem receive a
// separating cut in one round of the refinement loop.
enum class CutPolicy { all_minimizers, first_minimizer, max_gradient_norm };

// Terminal state of one defining inequality in the refinement loop.
//   convex       curvature certified nonnegative on the active boundary;
//   inactive     the boundary piece never meets the feasible set;
//   saturated    every new cut duplicates an existing one, so the piece's
//                negatively curved boundary is already cut away;
//   inconclusive the hierarchy returned only an uncertified negative bound.
enum class PieceStatus { pending, convex, inactive, saturated, inconclusive };

// One curvature certification event in the refinement loop.
struct CurvatureCheck {
  int piece = 0;
  int round = 0;
  RelaxationStatus status = RelaxationStatus::bound_only;
  double bound = 0.0;
  int order_used = 0;
  std::vector<std::vector<double>> minimizers;  // x-part only
  int cuts_added = 0;
  std::string note;
};

struct InnerOptions {
  CutPolicy policy = CutPolicy::all_minimizers;
  double eps = 1e-6;          // margin added to each cut after normalization
  int max_rounds = 20;
  double curvature_tol = 1e-7;  // bound >= -tol counts as nonnegative
  double near_zero = 1e-2;      // annotation threshold for uncertified bounds
  double dup_tol = 1e-6;        // coefficient distance identifying equal cuts
  CertifyOptions certify;
};

struct InnerResult {
  SemialgebraicSet region;  // defining inequalities plus cuts, no ball
  PolyVector cuts;
  bool convex_certified = false;
  std::vector<PieceStatus> piece_status;  // one per defining inequality
  std::vector<CurvatureCheck> log;
};

// Supporting halfspace that excludes the boundary point x_star: the affine
// polynomial ghat . (x - x_star) + eps with ghat the unit outward gradient
// of the piece at x_star. Throws if the gradient vanishes at x_star.
Polynomial separating_halfspace(const Polynomial& piece,
                                const std::vector<double>& x_star, double eps);

struct ConvexityReport {
  bool certified = false;
  std::vector<CurvatureCheck> checks;
};

// Certifies convexity of S by checking, for every nonaffine defining
// inequality, that the boundary curvature problem has nonnegative optimum.
ConvexityReport is_convex(const SemialgebraicSet& S,
                          const CertifyOptions& opts = {});

// Convexifying refinement loop: repeatedly certifies boundary curvature and
// cuts away certified concave boundary points with supporting halfspaces
// until every piece is convex, inactive, or saturated.
InnerResult inner_approximation(const SemialgebraicSet& S,
                                const InnerOptions& opts = {});

}  // namespace convin
