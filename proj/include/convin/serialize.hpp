#pragma once

#include <json.hpp>

#include <string>

#include "convin/curvature.hpp"
#include "convin/extract.hpp"
#include "convin/inner.hpp"
#include "convin/semialg.hpp"

namespace convin {

// JSON encodings used by the file formats and the command line.
//
// Polynomial: {"n": 2, "terms": [{"exp": [1,1], "coef": 1.0}, ...]}
// Set:        {"n": 2, "ineqs": [<Polynomial>...], "ball_radius": null}
// Problem:    {"vars": 2, "objective": <Polynomial>,
//              "eqs": [...], "ineqs": [...]}

nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

nlohmann::json set_to_json(const SemialgebraicSet& S);
SemialgebraicSet set_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const PolyOptProblem& prob);
PolyOptProblem problem_from_json(const nlohmann::json& j);

// Result encodings (one-way, for output streams).
nlohmann::json order_log_to_json(const OrderLog& log);
nlohmann::json certified_to_json(const CertifiedOptimum& c);
nlohmann::json inner_result_to_json(const InnerResult& r);

// File helpers; throw std::runtime_error on I/O failure.
nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

}  // namespace convin
