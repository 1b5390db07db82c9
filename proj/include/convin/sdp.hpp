#pragma once

#include <Eigen/Dense>
#include <vector>

#include "convin/moment.hpp"

namespace convin {

enum class SdpStatus { optimal, infeasible, unbounded, numerical_failure };

struct SdpOptions {
  double tol = 1e-8;         // target feasibility/gap tolerance
  double accept_tol = 3e-4;  // reporting tolerance for declaring optimality
  int max_iters = 200;
  double diverge_threshold = 1e8;
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  double primal_obj = 0.0;  // value of the moment objective at the solution
  double dual_obj = 0.0;    // certified lower bound from the conic dual
  Eigen::VectorXd moment_values;
  std::vector<Eigen::MatrixXd> block_matrices;  // PSD blocks at the solution
  std::vector<Eigen::MatrixXd> dual_blocks;     // conic dual multipliers
  double primal_residual = 0.0;  // equality-row residual, infinity norm
  double dual_residual = 0.0;    // dual feasibility residual, relative
  double gap = 0.0;              // relative duality gap
  int iterations = 0;
};

SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts = {});

// Independent KKT check at a returned solution: recomputes the equality
// residual, block eigenvalue floor, and complementarity from the problem
// data alone.
struct KktReport {
  double eq_residual_inf = 0.0;
  double min_block_eigenvalue = 0.0;
  double complementarity = 0.0;  // <X, S> over all blocks
  double scale = 1.0;
};
KktReport verify_kkt(const SdpProblem& prob, const SdpSolution& sol);

// Reconstructs the order-d truncated moment matrix from the solved moment
// values (d <= basis order of the relaxation).
Eigen::MatrixXd moment_matrix(const SdpProblem& prob,
                              const Eigen::VectorXd& moment_values, int d);

}  // namespace convin
