#pragma once

#include <memory>

#include "plcore/parser.hpp"
#include "plcore/structure.hpp"
#include "plcore/theory.hpp"

namespace plcore::fixtures {

// Signature with three unary predicates P0, P1, P2 over one sort s.
inline SigPtr sig_p3() {
    return std::make_shared<Signature>(
        std::vector<std::string>{"s"},
        std::vector<Relation>{{"P0", {0}}, {"P1", {0}}, {"P2", {0}}});
}

// The 3-element model with singleton predicates.
inline StructPtr u3() {
    return make_structure(sig_p3(), {3}, {{{0}}, {{1}}, {{2}}});
}

// Disjoint-subsets axioms: no element carries two predicates.
inline HuTheory t3() {
    SigPtr sig = sig_p3();
    std::vector<HuSentence> ax;
    ax.push_back(parse_hu(sig, "forall x. ~(P0(x) & P1(x))"));
    ax.push_back(parse_hu(sig, "forall x. ~(P0(x) & P2(x))"));
    ax.push_back(parse_hu(sig, "forall x. ~(P1(x) & P2(x))"));
    return HuTheory::from_sentences(sig, ax);
}

// One binary relation E over one sort.
inline SigPtr sig_digraph() {
    return std::make_shared<Signature>(std::vector<std::string>{"v"},
                                       std::vector<Relation>{{"E", {0, 0}}});
}

inline StructPtr digraph(int n, std::vector<Tuple> edges) {
    return make_structure(sig_digraph(), {n}, {std::move(edges)});
}

// Acyclicity truncated at cycle length 4.
inline HuTheory dag4() {
    SigPtr sig = sig_digraph();
    std::vector<HuSentence> ax;
    ax.push_back(parse_hu(sig, "forall x. ~(E(x,x))"));
    ax.push_back(parse_hu(sig, "forall x y. ~(E(x,y) & E(y,x))"));
    ax.push_back(parse_hu(sig, "forall x y z. ~(E(x,y) & E(y,z) & E(z,x))"));
    ax.push_back(parse_hu(sig, "forall x y z w. ~(E(x,y) & E(y,z) & E(z,w) & E(w,x))"));
    return HuTheory::from_sentences(sig, ax);
}

// Doubled-pair signature: unary I00, I11 and binary S over one sort.
inline SigPtr sig_d2() {
    return std::make_shared<Signature>(
        std::vector<std::string>{"s"},
        std::vector<Relation>{{"I00", {0}}, {"I11", {0}}, {"S", {0, 0}}});
}

// Universe {a0,a1,b0,b1} = {0,1,2,3}; I00 = {0,1}, I11 = {2,3},
// S = same-letter swaps.
inline StructPtr d2() {
    return make_structure(sig_d2(), {4},
                          {{{0}, {1}}, {{2}, {3}}, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}});
}

// h-universal axioms of the doubled pair with forbidden patterns of up to two
// elements.
inline HuTheory d2_theory() {
    SigPtr sig = sig_d2();
    std::vector<HuSentence> ax;
    ax.push_back(parse_hu(sig, "forall x. ~(I00(x) & I11(x))"));
    ax.push_back(parse_hu(sig, "forall x. ~(S(x,x))"));
    ax.push_back(parse_hu(sig, "forall x y. ~(S(x,y) & I00(x) & I11(y))"));
    ax.push_back(parse_hu(sig, "forall x y. ~(S(x,y) & I11(x) & I00(y))"));
    return HuTheory::from_sentences(sig, ax);
}

// Strict linear order 0 < 1 < 2 as a binary relation.
inline SigPtr sig_order() {
    return std::make_shared<Signature>(std::vector<std::string>{"s"},
                                       std::vector<Relation>{{"lt", {0, 0}}});
}

inline StructPtr chain3() {
    return make_structure(sig_order(), {3}, {{{0, 1}, {0, 2}, {1, 2}}});
}

}  // namespace plcore::fixtures
