#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "convin/curvature.hpp"
#include "convin/polynomial.hpp"

namespace convin {

// Graded-lex monomial basis of all monomials with degree <= order.
struct MomentBasis {
  int vars = 0;
  int order = 0;
  std::vector<Monomial> monos;

  static MomentBasis build(int vars, int order);
  // Number of basis elements of degree <= d (a prefix, by grlex ordering).
  std::size_t count_up_to(int d) const;
};

// Sparse linear form over the global moment variables.
struct LinForm {
  std::vector<std::pair<int, double>> terms;
  void add(int idx, double coef);
};

// One PSD block whose entries are linear forms in the shared moment
// variables (the moment matrix itself, or a localizing matrix).
struct SdpBlock {
  int dim = 0;
  std::string label;
  // Upper triangle only: (i, j, form) with j >= i.
  std::vector<std::tuple<int, int, LinForm>> entries;
};

// Order-k Lasserre moment relaxation in block form: minimize a linear
// functional of the moments subject to PSD block constraints, linear
// equality rows (equality constraints of the problem, applied against all
// admissible monomial multipliers), and the normalization moment(1) = 1.
struct SdpProblem {
  MomentBasis basis;              // basis of the moment matrix (order k)
  std::vector<Monomial> moments;  // global moment variables (degree <= 2k)
  std::vector<SdpBlock> blocks;   // blocks[0] is the moment matrix
  std::vector<LinForm> eq_rows;
  std::vector<double> eq_rhs;
  LinForm objective;

  int moment_index(const Monomial& m) const;  // -1 if absent
};

// Smallest admissible relaxation order: ceil(maxdeg/2) over the objective
// and all constraints (at least 1).
int min_relaxation_order(const PolyOptProblem& prob);

SdpProblem build_relaxation(const PolyOptProblem& prob, int k);

// Sparse text round-trip for debugging against external solvers; the format
// is documented in the README.
std::string sdp_to_text(const SdpProblem& prob);
SdpProblem sdp_from_text(std::istream& in);

}  // namespace convin
