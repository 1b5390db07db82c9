#include "convin/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace convin {

using nlohmann::json;

json polynomial_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [mono, coef] : p.terms()) {
    terms.push_back({{"exp", mono.exponents}, {"coef", coef}});
  }
  return {{"n", p.dimension()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  if (n < 0) throw std::runtime_error("polynomial dimension must be >= 0");
  Polynomial p(n);
  for (const auto& t : j.at("terms")) {
    auto exp = t.at("exp").get<std::vector<int>>();
    if (static_cast<int>(exp.size()) != n)
      throw std::runtime_error("exponent vector length does not match n");
    for (int e : exp)
      if (e < 0) throw std::runtime_error("negative exponent");
    p.add_term(Monomial(std::move(exp)), t.at("coef").get<double>());
  }
  return p;
}

json set_to_json(const SemialgebraicSet& S) {
  json ineqs = json::array();
  for (const auto& p : S.ineqs) ineqs.push_back(polynomial_to_json(p));
  json j = {{"n", S.n}, {"ineqs", ineqs}};
  if (S.ball_radius)
    j["ball_radius"] = *S.ball_radius;
  else
    j["ball_radius"] = nullptr;
  return j;
}

SemialgebraicSet set_from_json(const json& j) {
  SemialgebraicSet S;
  S.n = j.at("n").get<int>();
  for (const auto& pj : j.at("ineqs")) {
    Polynomial p = polynomial_from_json(pj);
    if (p.dimension() != S.n)
      throw std::runtime_error("inequality dimension does not match set");
    S.ineqs.push_back(std::move(p));
  }
  if (j.contains("ball_radius") && !j.at("ball_radius").is_null())
    S.ball_radius = j.at("ball_radius").get<double>();
  return S;
}

json problem_to_json(const PolyOptProblem& prob) {
  json eqs = json::array(), ineqs = json::array();
  for (const auto& p : prob.eqs) eqs.push_back(polynomial_to_json(p));
  for (const auto& p : prob.ineqs) ineqs.push_back(polynomial_to_json(p));
  return {{"vars", prob.vars},
          {"objective", polynomial_to_json(prob.objective)},
          {"eqs", eqs},
          {"ineqs", ineqs}};
}

PolyOptProblem problem_from_json(const json& j) {
  PolyOptProblem prob;
  prob.vars = j.at("vars").get<int>();
  prob.objective = polynomial_from_json(j.at("objective"));
  for (const auto& pj : j.at("eqs"))
    prob.eqs.push_back(polynomial_from_json(pj));
  for (const auto& pj : j.at("ineqs"))
    prob.ineqs.push_back(polynomial_from_json(pj));
  return prob;
}

namespace {

const char* status_name(RelaxationStatus s) {
  switch (s) {
    case RelaxationStatus::infeasible: return "infeasible";
    case RelaxationStatus::bound_only: return "bound_only";
    case RelaxationStatus::certified: return "certified";
  }
  return "unknown";
}

int status_code(RelaxationStatus s) {
  switch (s) {
    case RelaxationStatus::infeasible: return -1;
    case RelaxationStatus::bound_only: return 0;
    case RelaxationStatus::certified: return 1;
  }
  return 0;
}

const char* sdp_status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

const char* piece_status_name(PieceStatus s) {
  switch (s) {
    case PieceStatus::pending: return "pending";
    case PieceStatus::convex: return "convex";
    case PieceStatus::inactive: return "inactive";
    case PieceStatus::saturated: return "saturated";
    case PieceStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace

json order_log_to_json(const OrderLog& log) {
  return {{"order", log.order},
          {"sdp_status", sdp_status_name(log.sdp_status)},
          {"bound", log.bound},
          {"ranks", log.ranks},
          {"flat", log.flat},
          {"extracted", log.extracted},
          {"note", log.note}};
}

json certified_to_json(const CertifiedOptimum& c) {
  json log = json::array();
  for (const auto& l : c.log) log.push_back(order_log_to_json(l));
  return {{"status", status_code(c.status)},
          {"status_name", status_name(c.status)},
          {"bound", c.bound},
          {"order_used", c.order_used},
          {"minimizers", c.minimizers},
          {"log", log}};
}

json inner_result_to_json(const InnerResult& r) {
  json cuts = json::array();
  for (const auto& c : r.cuts) cuts.push_back(polynomial_to_json(c));
  json pieces = json::array();
  for (auto s : r.piece_status) pieces.push_back(piece_status_name(s));
  json log = json::array();
  for (const auto& e : r.log) {
    log.push_back({{"piece", e.piece},
                   {"round", e.round},
                   {"status", status_name(e.status)},
                   {"bound", e.bound},
                   {"order_used", e.order_used},
                   {"minimizers", e.minimizers},
                   {"cuts_added", e.cuts_added},
                   {"note", e.note}});
  }
  return {{"region", set_to_json(r.region)},
          {"cuts", cuts},
          {"convex_certified", r.convex_certified},
          {"piece_status", pieces},
          {"log", log}};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace convin
