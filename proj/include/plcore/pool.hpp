#pragma once

#include <optional>

#include "plcore/eval.hpp"
#include "plcore/formula.hpp"

namespace plcore {

struct PoolBudget {
    int max_atoms = 2;
    int max_bound_vars = 1;
    int max_free_arity = 2;

    static PoolBudget parse(const std::string& spec);  // "atoms:2,bvars:1,arity:2"
    std::string print() const;
};

// Deterministic enumeration of pp formulas over a signature within budgets.
// Free variables are named x0..x{f-1}, bound variables b0... Two formulas with
// identical solution sets over the reference structure are merged, keeping the
// enumeration-first representative; the reference also anchors determinism of
// the surviving list.
class FormulaPool {
public:
    FormulaPool(SigPtr sig, PoolBudget budget, StructPtr dedup_ref);

    // All pool formulas with exactly the given free sorts.
    const std::vector<PosFormula>& with_free_sorts(const std::vector<int>& free_sorts) const;

    // All free-sort tuples with arity in [min_arity, max_free_arity].
    std::vector<std::vector<int>> free_sort_tuples(int min_arity = 1) const;

    const PoolBudget& budget() const { return budget_; }
    const SigPtr& sig_ptr() const { return sig_; }

    // Byte-stable listing of the whole pool (for reproducibility checks).
    std::string listing() const;

private:
    SigPtr sig_;
    PoolBudget budget_;
    StructPtr ref_;
    mutable std::map<std::vector<int>, std::vector<PosFormula>> by_sorts_;

    std::vector<PosFormula> enumerate(const std::vector<int>& free_sorts) const;
};

}  // namespace plcore
