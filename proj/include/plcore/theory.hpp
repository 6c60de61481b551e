#pragma once

#include <optional>

#include "plcore/eval.hpp"
#include "plcore/hom.hpp"
#include "plcore/pool.hpp"

namespace plcore {

// h-universal theory: a finite list of forbidden pp sentences. Each axiom is
// kept both as a sentence and as its canonical forbidden structure.
struct HuAxiom {
    HuSentence sentence;
    StructPtr forbidden;  // canonical query structure of the matrix
    std::string text;     // printed form
};

struct HuTheory {
    SigPtr sig;
    std::vector<HuAxiom> axioms;

    static HuTheory from_sentences(SigPtr sig, const std::vector<HuSentence>& sentences);
    int max_forbidden_sort_size() const;
};

// Three-valued result of a bounded check. No always carries a witness the
// caller can re-verify.
struct NoWitness {
    std::string description;
    std::optional<PPFormula> formula;     // pp formula refuted in the subject
    SortedTuple tuple;                    // where it holds in the counter-model
    StructPtr counter_model;
    std::optional<Hom> hom;               // offending homomorphism, when relevant
};

struct Verdict {
    enum class Kind { Yes, No, Unknown } kind;
    std::optional<NoWitness> witness;  // set when kind == No
    int bound = 0;                     // the exhausted bound, when Unknown

    static Verdict yes() { return {Kind::Yes, std::nullopt, 0}; }
    static Verdict no(NoWitness w) { return {Kind::No, std::move(w), 0}; }
    static Verdict unknown(int bound) { return {Kind::Unknown, std::nullopt, bound}; }
    bool is_yes() const { return kind == Kind::Yes; }
    bool is_no() const { return kind == Kind::No; }
    bool is_unknown() const { return kind == Kind::Unknown; }
    std::string str() const;
};

// m satisfies every axiom; decided by forbidden-structure homomorphism search.
bool is_model(StructPtr m, const HuTheory& t);

// All models with 1..n elements per sort, up to isomorphism, in deterministic
// order (size vector lex-ascending, canonical key within a size). Generated
// incrementally: models of a larger size extend models of a smaller one.
std::vector<StructPtr> enumerate_models(const HuTheory& t, int n);

// Streaming variant; the callback returning false stops the enumeration.
void enumerate_models_stream(const HuTheory& t, int n,
                             const std::function<bool(StructPtr)>& yield);

// All structures over a signature within the size bound, up to isomorphism
// (the empty-theory special case; also used by consequence extraction).
std::vector<StructPtr> enumerate_structures(SigPtr sig, int n);

// Is m a positively closed model of t? Complete search over models of size
// <= n. Yes is only issued when the window is large enough and every model in
// it continues into m; otherwise a clean pass is reported as Unknown.
Verdict pc_check(StructPtr m, const HuTheory& t, int n,
                 const std::vector<StructPtr>* models = nullptr);

struct UniversalResult {
    Verdict verdict;
    StructPtr model;  // set when verdict is Yes
    std::vector<StructPtr> all_candidates;  // every model passing all checks
};

// Searches models of size <= n for the universal pc model: pc, absorbing
// every enumerated model, endomorphism-rigid.
UniversalResult find_universal(const HuTheory& t, int n);

// Certificate that a finite structure is the universal pc model of its own
// h-universal theory: every endomorphism is an automorphism. Sound without a
// size window.
bool certify_universal_for_own_theory(StructPtr u);

// Joint continuation property over pairs of models of size <= n, searched in
// a window of size 2n.
Verdict jcp_check(const HuTheory& t, int n);

struct InequalityDefinition {
    bool success = false;
    // per sort: disjuncts covering the inequality relation (empty list is the
    // empty disjunction, which covers a one-element sort trivially)
    std::vector<std::vector<PosFormula>> disjuncts;
    std::string failure;  // uncovered pair diagnostic
};

// A positive definition of inequality in u assembled from pool formulas, per
// sort: each disjunct has no diagonal solution and together they cover every
// unequal pair.
InequalityDefinition find_inequality_definition(StructPtr u, const FormulaPool& pool);

// The pu consequences of Th(m) whose forbidden structure has at most
// max_elems elements: hom-minimal structures with no homomorphism into m,
// negated. This is the bounded stand-in for the full h-universal theory.
HuTheory extract_consequences(StructPtr m, int max_elems);

struct HausdorffPairReport {
    int sort;
    Tuple rep_a, rep_b;
    bool found = false;
    std::string phi, psi;
};

struct HausdorffReport {
    std::vector<HausdorffPairReport> pairs;
    bool all_found = false;
};

// Diagnostic search: for each pair of distinct unary positive types of u,
// looks for pool formulas (phi, psi) with "forall x: phi | psi" valid in u,
// phi missing from one type and psi from the other. No completeness claim.
HausdorffReport hausdorff_probe(StructPtr u, const FormulaPool& pool);

}  // namespace plcore
