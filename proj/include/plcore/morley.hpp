#pragma once

#include "plcore/eval.hpp"
#include "plcore/formula.hpp"

namespace plcore {

// Full first-order formula tree. Internal to this module: the public formula
// grammar stays positive, and evaluation here is deliberately brute force.
class FoFormula {
public:
    enum class Kind { Atom, Eq, And, Or, Not, Exists, Forall };

    struct Node {
        Kind kind;
        int rel = -1;
        std::vector<int> args;
        std::vector<int> kids;
        std::vector<int> bound;
        int body = -1;
    };

    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<int>& free() const { return free_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    const SigPtr& sig_ptr() const { return sig_; }

    std::vector<int> free_sorts() const;
    std::string print() const;

    static FoFormula atom(SigPtr sig, int rel, const std::vector<Var>& args);
    static FoFormula eq(SigPtr sig, const Var& a, const Var& b);
    static FoFormula conj(const std::vector<FoFormula>& kids);
    static FoFormula disj(const std::vector<FoFormula>& kids);
    static FoFormula neg(const FoFormula& f);
    static FoFormula exists(const std::vector<std::string>& names, const FoFormula& body);
    static FoFormula forall(const std::vector<std::string>& names, const FoFormula& body);
    static FoFormula from_positive(const PosFormula& f);

private:
    SigPtr sig_;
    std::vector<Var> vars_;
    std::vector<int> free_;
    std::vector<Node> nodes_;
    int root_ = -1;

    std::string print_node(int id) const;
    friend FoFormula fo_combine(const std::vector<FoFormula>&, FoFormula::Kind);
};

// Brute-force Tarski evaluation over all assignments.
bool fo_holds_at(StructPtr m, const FoFormula& f, const Tuple& tuple);
std::vector<Tuple> fo_solutions(StructPtr m, const FoFormula& f);

// The first-order formulas of quantifier rank <= rank in the free variables
// x0..x{arity-1}, generated up to logical equivalence over m: atoms and their
// negations, closed under conjunction/disjunction to a fixpoint of definable
// tables, then one quantifier layer per rank step. Deterministic.
std::vector<FoFormula> fo_pool(StructPtr m, int rank, int arity);

struct MorleyResult {
    StructPtr structure;  // same universe, one relation per pool formula
    std::vector<std::pair<std::string, std::string>> manifest;  // relation -> formula
};

// Positive Morleyization: one fresh relation per pool formula, interpreted as
// its first-order solution set.
MorleyResult morleyize(StructPtr m, const std::vector<FoFormula>& pool);

// h preserves the truth value of every pool formula in both directions.
bool elementary_check(const std::vector<std::vector<int>>& h, StructPtr m, StructPtr n,
                      const std::vector<FoFormula>& pool);

// All maps m -> n preserving every pool formula both ways.
std::vector<std::vector<std::vector<int>>> pool_elementary_maps(
    StructPtr m, StructPtr n, const std::vector<FoFormula>& pool);

// Expansion by partial positive types: adds one relation per formula set,
// interpreted as the intersection of the solution sets. Original relations
// are kept.
StructPtr tp_expand(StructPtr m, const std::vector<std::vector<PosFormula>>& sigma_pool);

}  // namespace plcore
