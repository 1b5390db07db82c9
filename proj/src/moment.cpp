#include "convin/moment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace convin {

MomentBasis MomentBasis::build(int vars, int order) {
  MomentBasis b;
  b.vars = vars;
  b.order = order;
  b.monos = monomials_up_to(vars, order);
  return b;
}

std::size_t MomentBasis::count_up_to(int d) const {
  return monomial_count(vars, std::min(d, order));
}

void LinForm::add(int idx, double coef) {
  if (coef == 0.0) return;
  for (auto& [i, c] : terms) {
    if (i == idx) {
      c += coef;
      return;
    }
  }
  terms.emplace_back(idx, coef);
}

int SdpProblem::moment_index(const Monomial& m) const {
  auto it = std::lower_bound(moments.begin(), moments.end(), m, grlex_less);
  if (it == moments.end() || !(it->exponents == m.exponents)) return -1;
  return static_cast<int>(it - moments.begin());
}

int min_relaxation_order(const PolyOptProblem& prob) {
  int d = std::max(1, prob.objective.degree());
  for (const auto& p : prob.eqs) d = std::max(d, p.degree());
  for (const auto& p : prob.ineqs) d = std::max(d, p.degree());
  return (d + 1) / 2;
}

SdpProblem build_relaxation(const PolyOptProblem& prob, int k) {
  if (k < min_relaxation_order(prob))
    throw std::invalid_argument("build_relaxation: order below minimum");
  const int v = prob.vars;

  SdpProblem sdp;
  sdp.basis = MomentBasis::build(v, k);
  sdp.moments = monomials_up_to(v, 2 * k);

  auto idx = [&](const Monomial& m) {
    int i = sdp.moment_index(m);
    if (i < 0) throw std::logic_error("build_relaxation: moment out of range");
    return i;
  };

  // Moment matrix M_k.
  {
    SdpBlock blk;
    blk.dim = static_cast<int>(sdp.basis.monos.size());
    blk.label = "moment";
    for (int i = 0; i < blk.dim; ++i)
      for (int j = i; j < blk.dim; ++j) {
        LinForm f;
        f.add(idx(sdp.basis.monos[i].times(sdp.basis.monos[j])), 1.0);
        blk.entries.emplace_back(i, j, std::move(f));
      }
    sdp.blocks.push_back(std::move(blk));
  }

  // Localizing matrix of -g for every inequality g <= 0.
  for (std::size_t gi = 0; gi < prob.ineqs.size(); ++gi) {
    const Polynomial& g = prob.ineqs[gi];
    int kg = k - (g.degree() + 1) / 2;
    if (kg < 0)
      throw std::invalid_argument("build_relaxation: order below minimum");
    auto sub = monomials_up_to(v, kg);
    SdpBlock blk;
    blk.dim = static_cast<int>(sub.size());
    blk.label = "loc" + std::to_string(gi);
    for (int i = 0; i < blk.dim; ++i)
      for (int j = i; j < blk.dim; ++j) {
        Monomial ab = sub[i].times(sub[j]);
        LinForm f;
        for (const auto& [m, c] : g.terms()) f.add(idx(ab.times(m)), -c);
        blk.entries.emplace_back(i, j, std::move(f));
      }
    sdp.blocks.push_back(std::move(blk));
  }

  // Equality constraints h = 0 against all admissible multipliers.
  for (const auto& h : prob.eqs) {
    int dmax = 2 * k - h.degree();
    for (const auto& mult : monomials_up_to(v, dmax)) {
      LinForm row;
      for (const auto& [m, c] : h.terms()) row.add(idx(mult.times(m)), c);
      if (row.terms.empty()) continue;
      sdp.eq_rows.push_back(std::move(row));
      sdp.eq_rhs.push_back(0.0);
    }
  }

  // Normalization: the moment of 1 is pinned to 1.
  {
    LinForm row;
    row.add(0, 1.0);
    sdp.eq_rows.push_back(std::move(row));
    sdp.eq_rhs.push_back(1.0);
  }

  for (const auto& [m, c] : prob.objective.terms())
    sdp.objective.add(idx(m), c);

  return sdp;
}

std::string sdp_to_text(const SdpProblem& prob) {
  std::ostringstream out;
  out.precision(17);
  out << "convin-sdp 1\n";
  out << "vars " << prob.basis.vars << " order " << prob.basis.order << "\n";
  auto put_form = [&](const LinForm& f) {
    out << f.terms.size();
    for (const auto& [i, c] : f.terms) out << " " << i << " " << c;
  };
  out << "objective ";
  put_form(prob.objective);
  out << "\n";
  for (const auto& blk : prob.blocks) {
    out << "block " << blk.dim << " " << blk.label << "\n";
    for (const auto& [i, j, f] : blk.entries) {
      out << "entry " << i << " " << j << " ";
      put_form(f);
      out << "\n";
    }
  }
  for (std::size_t r = 0; r < prob.eq_rows.size(); ++r) {
    out << "eq " << prob.eq_rhs[r] << " ";
    put_form(prob.eq_rows[r]);
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

SdpProblem sdp_from_text(std::istream& in) {
  SdpProblem prob;
  std::string tag, label;
  int version = 0;
  in >> tag >> version;
  if (tag != "convin-sdp" || version != 1)
    throw std::runtime_error("sdp_from_text: bad header");
  auto get_form = [&]() {
    LinForm f;
    std::size_t n = 0;
    in >> n;
    for (std::size_t t = 0; t < n; ++t) {
      int i;
      double c;
      in >> i >> c;
      f.add(i, c);
    }
    return f;
  };
  while (in >> tag) {
    if (tag == "vars") {
      int v, k;
      in >> v >> tag >> k;
      prob.basis = MomentBasis::build(v, k);
      prob.moments = monomials_up_to(v, 2 * k);
    } else if (tag == "objective") {
      prob.objective = get_form();
    } else if (tag == "block") {
      SdpBlock blk;
      in >> blk.dim >> blk.label;
      prob.blocks.push_back(std::move(blk));
    } else if (tag == "entry") {
      int i, j;
      in >> i >> j;
      prob.blocks.back().entries.emplace_back(i, j, get_form());
    } else if (tag == "eq") {
      double rhs;
      in >> rhs;
      prob.eq_rows.push_back(get_form());
      prob.eq_rhs.push_back(rhs);
    } else if (tag == "end") {
      break;
    } else {
      throw std::runtime_error("sdp_from_text: unknown tag " + tag);
    }
  }
  return prob;
}

}  // namespace convin
