#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plcore/structure.hpp"

namespace plcore {

struct Var {
    std::string name;
    int sort;
};

// Positive formula: atoms, equality, conjunction, disjunction, existential
// quantification. Stored as an arena tree with a per-formula variable table;
// all variable ids are distinct (no shadowing), so substitution and prenexing
// never capture.
class PosFormula {
public:
    enum class Kind { Atom, Eq, And, Or, Exists };

    struct Node {
        Kind kind;
        int rel = -1;             // Atom
        std::vector<int> args;    // Atom: var ids; Eq: exactly two var ids
        std::vector<int> kids;    // And / Or
        std::vector<int> bound;   // Exists: var ids
        int body = -1;            // Exists
    };

    PosFormula() = default;

    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<int>& free() const { return free_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    const SigPtr& sig_ptr() const { return sig_; }
    const Signature& sig() const { return *sig_; }

    std::vector<int> free_sorts() const;
    std::string print() const;

    // --- structural builders (deterministic variable-id management) ---
    static PosFormula atom(SigPtr sig, int rel, const std::vector<Var>& args);
    static PosFormula eq(SigPtr sig, const Var& a, const Var& b);
    // Free variables of the children are merged by name (sorts must agree).
    static PosFormula conj(const std::vector<PosFormula>& kids);
    static PosFormula disj(const std::vector<PosFormula>& kids);
    // Quantifies over the named free variables of body (must exist).
    static PosFormula exists(const std::vector<std::string>& names, const PosFormula& body);

    // Renames free variables (by position in free()) to the given names,
    // merging variables that receive the same name.
    PosFormula rename_free(const std::vector<std::string>& names) const;

    friend struct PPFormula;

private:
    SigPtr sig_;
    std::vector<Var> vars_;
    std::vector<int> free_;
    std::vector<Node> nodes_;
    int root_ = -1;

    static PosFormula combine(const std::vector<PosFormula>& kids, Kind kind);

    int add_node(Node n) {
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }
    std::string print_node(int id, bool parens) const;
};

struct PPAtom {
    int rel;
    std::vector<int> args;  // var ids
    bool operator<(const PPAtom& o) const {
        return rel != o.rel ? rel < o.rel : args < o.args;
    }
    bool operator==(const PPAtom& o) const { return rel == o.rel && args == o.args; }
};

// Primitive positive formula in prenex form: exists(bound) /\ atoms /\ eqs.
struct PPFormula {
    SigPtr sig;
    std::vector<Var> vars;
    std::vector<int> free;
    std::vector<int> bound;
    std::vector<PPAtom> atoms;
    std::vector<std::pair<int, int>> eqs;  // var-id pairs, same sort

    std::vector<int> free_sorts() const;
    PosFormula to_formula() const;
    std::string print() const { return to_formula().print(); }
};

// Closed h-universal sentence: forall vars . ~(pp matrix).
struct HuSentence {
    PPFormula matrix;  // closed: every variable is bound
    std::string print() const;
};

// Distributes disjunction over conjunction/quantifiers; the disjunction of the
// result has the same solution set as the input in every structure.
// Throws if the number of disjuncts would exceed the cap.
std::vector<PPFormula> pp_normal_form(const PosFormula& phi, std::size_t disjunct_cap = 65536);

// Canonical conjunctive query of a structure: one free variable per marked
// position, one bound variable per unmarked element, atoms for all facts.
// Marked positions naming the same element repeatedly yield equality atoms.
PPFormula canonical_query(const FinStructure& a, const SortedTuple& marked);

// Inverse direction: the canonical structure of a pp formula. Equality atoms
// are resolved by unifying variables. Returns the structure and the marked
// tuple corresponding to the free variables.
std::pair<StructPtr, SortedTuple> structure_of_pp(const PPFormula& phi);

}  // namespace plcore
