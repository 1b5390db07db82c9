#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "convin/curvature.hpp"
#include "convin/sdp.hpp"

namespace convin {

// Outcome of running the moment hierarchy on one problem.
//   infeasible : some relaxation is infeasible, so the problem itself is
//                (the bound is meaningless in this case);
//   bound_only : a valid lower bound was obtained but no finite minimizer
//                set could be certified;
//   certified  : flat extension held and extracted minimizers were verified
//                feasible with objective value matching the bound.
enum class RelaxationStatus { infeasible, bound_only, certified };

struct OrderLog {
  int order = 0;
  SdpStatus sdp_status = SdpStatus::numerical_failure;
  double bound = 0.0;
  std::vector<int> ranks;  // rank of M_d for d = 0..k
  bool flat = false;
  bool extracted = false;
  std::string note;
};

struct CertifiedOptimum {
  RelaxationStatus status = RelaxationStatus::bound_only;
  double bound = 0.0;  // best certified lower bound (dual objective)
  int order_used = 0;  // relaxation order that produced the result
  std::vector<std::vector<double>> minimizers;
  std::vector<OrderLog> log;
};

struct CertifyOptions {
  int max_order = 5;
  double rank_tol = 1e-4;   // relative eigenvalue cutoff for ranks
  double feas_tol = 1e-6;  // constraint tolerance when verifying minimizers
  double obj_tol = 1e-4;   // |objective(minimizer) - bound| tolerance
  unsigned rng_seed = 12345;
  SdpOptions sdp;
};

// Numerical rank of a symmetric PSD matrix by singular-value cutoff
// relative to the largest singular value.
int numerical_rank(const Eigen::MatrixXd& M, double rank_tol);

// Flat extension test at order k: rank M_{k-1} == rank M_k on the solved
// moment values. Fills `ranks` with rank M_d for d = 0..k.
bool check_flatness(const SdpProblem& prob, const Eigen::VectorXd& moments,
                    double rank_tol, std::vector<int>* ranks = nullptr);

// Atom extraction from a flat moment matrix (column echelon basis plus
// simultaneous diagonalization of the multiplication operators), applied to
// the truncation M_level (level = -1 uses the full relaxation order).
// Returns the extracted points; empty on numerical failure.
std::vector<std::vector<double>> extract_minimizers(const SdpProblem& prob,
                                                    const Eigen::VectorXd& moments,
                                                    const CertifyOptions& opts,
                                                    int level = -1);

// Runs the hierarchy from the minimal admissible order up to
// opts.max_order, applying the flatness test and extraction at each order,
// and verifying extracted points against the original problem data.
CertifiedOptimum certify(const PolyOptProblem& prob,
                         const CertifyOptions& opts = {});

}  // namespace convin
