#pragma once

#include <string>

#include "convin/semialg.hpp"

namespace convin {

// Named example sets used across tests and the command line.

// Smooth convex quartic {x1^4 + x2^4 + x1^2 + x2 <= 0}.
SemialgebraicSet egg_set();

// Nonconvex quartic {x1^4 + x2^4 + x1^2 + x2^3 <= 0} with a singular point
// at the origin.
SemialgebraicSet waterdrop_set();

// Singular quartic {x1^4 + x2^4 + x2^3 + shift <= 0}; shift perturbs the
// constant term (positive shrinks, negative enlarges the set).
SemialgebraicSet singular_set(double shift = 0.0);

// Unbounded hyperbolic region {x1 x2 - 1 <= 0} with a compactifying ball of
// radius 10 for the moment relaxations.
SemialgebraicSet hyperbola_set();

// Lookup by name: egg | waterdrop | singular | singular+ | singular- |
// hyperbola | schur3 | schur4 (schur4 uses parameter a).
// Throws std::invalid_argument for unknown names.
SemialgebraicSet named_set(const std::string& name, double a = 0.0);

}  // namespace convin
