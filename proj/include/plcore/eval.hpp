#pragma once

#include <map>
#include <string>

#include "plcore/formula.hpp"
#include "plcore/hom.hpp"

namespace plcore {

// Assignment of the formula's free variables, by name.
using Assignment = std::map<std::string, int>;

// Tarski satisfaction of a positive formula, decided by converting to pp
// normal form and running a pinned homomorphism search per disjunct.
bool holds(StructPtr m, const PosFormula& phi, const Assignment& asg);

// Convenience: assigns free variables positionally.
bool holds_at(StructPtr m, const PosFormula& phi, const Tuple& tuple);

// The full solution set { t | holds(m, phi, t) }, ascending. Tuples follow the
// order of phi.free(). Results are cached per (structure, formula) pair.
const std::vector<Tuple>& solutions(StructPtr m, const PosFormula& phi);

// Drops all cached solution sets (mainly for tests measuring determinism).
void clear_eval_cache();

}  // namespace plcore
