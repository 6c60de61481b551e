#pragma once

#include "plcore/structure.hpp"

namespace plcore {

// Canonical labeling by table-lexicographic minimization over per-sort
// permutations, with a unary-profile refinement so that only permutations
// preserving unary memberships are tried. Intended for desk-scale structures;
// throws if the residual permutation count exceeds the budget.
struct CanonicalForm {
    std::string key;                      // encoding of the minimal relabeling
    std::vector<std::vector<int>> perm;   // old id -> new id, per sort
};

CanonicalForm canonical_form(const FinStructure& s, long long perm_budget = 2'000'000);

StructPtr canonicalize(const FinStructure& s, long long perm_budget = 2'000'000);

bool iso_equal(const FinStructure& a, const FinStructure& b, long long perm_budget = 2'000'000);

}  // namespace plcore
