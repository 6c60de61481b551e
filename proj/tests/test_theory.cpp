#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "plcore/canonical.hpp"
#include "plcore/theory.hpp"

using namespace plcore;
using namespace plcore::fixtures;

TEST_CASE("is_model") {
    SUBCASE("the disjoint-subsets model satisfies its axioms") {
        CHECK(is_model(u3(), t3()));
    }
    SUBCASE("an element with two predicates violates disjointness") {
        auto bad = make_structure(sig_p3(), {1}, {{{0}}, {{0}}, {}});
        CHECK(!is_model(bad, t3()));
    }
    SUBCASE("a 3-cycle violates the acyclicity axioms") {
        auto c3 = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
        CHECK(!is_model(c3, dag4()));
    }
}

TEST_CASE("is_model agrees with naive axiom evaluation on small structures") {
    HuTheory t = dag4();
    for (int n = 1; n <= 3; ++n) {
        int cells = n * n;
        for (int mask = 0; mask < (1 << cells); mask += (n == 3 ? 3 : 1)) {
            std::vector<Tuple> edges;
            for (int c = 0; c < cells; ++c)
                if (mask & (1 << c)) edges.push_back({c / n, c % n});
            auto m = digraph(n, edges);
            bool naive = true;
            for (const auto& ax : t.axioms) {
                // the axiom holds iff its matrix has no satisfying assignment
                PPFormula open = ax.sentence.matrix;
                open.free = open.bound;
                open.bound.clear();
                if (!oracles::naive_solutions(*m, open.to_formula()).empty()) naive = false;
            }
            CHECK(is_model(m, t) == naive);
        }
    }
}

TEST_CASE("enumerate_models counts") {
    SUBCASE("disjoint subsets at size 1: four labelings") {
        CHECK(enumerate_models(t3(), 1).size() == 4);
    }
    SUBCASE("one unary relation, no axioms, size 1: two structures") {
        auto sig = std::make_shared<Signature>(std::vector<std::string>{"s"},
                                               std::vector<Relation>{{"P", {0}}});
        HuTheory empty{sig, {}};
        CHECK(enumerate_models(empty, 1).size() == 2);
    }
    SUBCASE("digraphs without short cycles at size 2") {
        auto models = enumerate_models(dag4(), 2);
        // size 1: the single vertex; size 2: empty and single edge
        CHECK(models.size() == 3);
        for (const auto& m : models) CHECK(is_model(m, dag4()));
    }
    SUBCASE("enumeration is canonical and duplicate-free") {
        auto models = enumerate_models(t3(), 3);
        std::set<std::string> keys;
        for (const auto& m : models)
            keys.insert(canonical_form(*m).key + ";" + std::to_string(m->total_size()));
        CHECK(keys.size() == models.size());
    }
}

TEST_CASE("pc_check on the disjoint-subsets model") {
    auto verdict = pc_check(u3(), t3(), 4);
    CHECK(verdict.is_yes());
}

TEST_CASE("pc_check rejects the single edge under acyclicity") {
    auto e = digraph(2, {{0, 1}});
    auto verdict = pc_check(e, dag4(), 3);
    REQUIRE(verdict.is_no());
    const NoWitness& w = *verdict.witness;
    REQUIRE(w.formula.has_value());
    // the witness is machine-checkable: holds at the image, not at the source
    PosFormula phi = w.formula->to_formula();
    CHECK(holds_at(w.counter_model, phi, w.tuple.elems));
    CHECK(!holds_at(e, phi, {0, 1}));
    // the density pattern itself separates source from extension
    auto mid = digraph(3, {{0, 1}, {1, 2}, {0, 2}});
    PosFormula density = parse_positive(sig_digraph(), "exists z. E(x,z) & E(z,y)");
    CHECK(holds_at(mid, density, {0, 2}));
    CHECK(!holds_at(e, density, {0, 1}));
}

TEST_CASE("pc_check rejects a model with a floating extra point") {
    auto bigger = make_structure(sig_p3(), {4}, {{{0}}, {{1}}, {{2}}});
    auto verdict = pc_check(bigger, t3(), 4);
    REQUIRE(verdict.is_no());
    CHECK(holds_at(verdict.witness->counter_model, verdict.witness->formula->to_formula(),
                   verdict.witness->tuple.elems));
}

TEST_CASE("pc_check below the certification window reports Unknown") {
    auto verdict = pc_check(u3(), t3(), 3);  // window needs 3 + 1
    CHECK(verdict.is_unknown());
}

TEST_CASE("find_universal recovers the disjoint-subsets model") {
    UniversalResult r = find_universal(t3(), 4);
    REQUIRE(r.verdict.is_yes());
    CHECK(iso_equal(*r.model, *u3()));
    CHECK(r.all_candidates.size() == 1);  // unique among models of size <= 4
}

TEST_CASE("find_universal on truncated acyclicity is Unknown") {
    UniversalResult r = find_universal(dag4(), 3);
    CHECK(r.verdict.is_unknown());
}

TEST_CASE("find_universal on the doubled-pair truncation is Unknown") {
    // The truncated axioms admit size-5 models (odd walks, long label paths)
    // that do not continue into the doubled pair, so no candidate certifies.
    UniversalResult r = find_universal(d2_theory(), 5);
    CHECK(r.verdict.is_unknown());
}

TEST_CASE("the doubled pair is universal for its own theory") {
    CHECK(certify_universal_for_own_theory(d2()));
    CHECK(is_model(d2(), d2_theory()));
    // every model of the truncation of size <= 2 continues into it
    HomSearchOptions first;
    first.mode = SearchMode::First;
    for (const auto& m : enumerate_models(d2_theory(), 2))
        CHECK(!find_hom(m, d2(), empty_pin(*m), first).empty());
}

TEST_CASE("pc uniqueness probe: mutually immersing certified models are isomorphic") {
    auto models = enumerate_models(t3(), 3);
    std::vector<StructPtr> certified;
    for (const auto& m : models)
        if (pc_check(m, t3(), 4).is_yes()) certified.push_back(m);
    HomSearchOptions first;
    first.mode = SearchMode::First;
    for (const auto& a : certified)
        for (const auto& b : certified) {
            auto ha = find_hom(a, b, empty_pin(*a), first);
            auto hb = find_hom(b, a, empty_pin(*b), first);
            if (!ha.empty() && !hb.empty() && is_immersion(ha[0]) && is_immersion(hb[0]))
                CHECK(iso_equal(*a, *b));
        }
}

TEST_CASE("jcp_check") {
    SUBCASE("disjoint subsets amalgamate") { CHECK(jcp_check(t3(), 2).is_yes()); }
    SUBCASE("acyclic digraphs amalgamate by disjoint union") {
        CHECK(jcp_check(dag4(), 2).is_yes());
    }
    SUBCASE("a cross-element conflict blocks amalgamation") {
        auto sig = std::make_shared<Signature>(
            std::vector<std::string>{"s"}, std::vector<Relation>{{"A", {0}}, {"B", {0}}});
        std::vector<HuSentence> ax;
        ax.push_back(parse_hu(sig, "forall x. ~(A(x) & B(x))"));
        ax.push_back(parse_hu(sig, "forall x y. ~(A(x) & B(y))"));
        HuTheory t = HuTheory::from_sentences(sig, ax);
        Verdict v = jcp_check(t, 1);
        REQUIRE(v.is_no());
        CHECK(v.witness->formula.has_value());
    }
}

TEST_CASE("inequality definitions") {
    SUBCASE("disjoint subsets: predicate pairs cover all unequal pairs") {
        auto u = u3();
        FormulaPool pool(sig_p3(), PoolBudget{2, 0, 2}, u);
        auto def = find_inequality_definition(u, pool);
        REQUIRE(def.success);
        std::set<std::pair<int, int>> covered;
        for (const PosFormula& phi : def.disjuncts[0]) {
            for (const Tuple& t : solutions(u, phi)) {
                CHECK(t[0] != t[1]);  // apart from the diagonal
                covered.insert({t[0], t[1]});
            }
        }
        CHECK(covered.size() == 6);  // all ordered unequal pairs
    }
    SUBCASE("one-element sort is covered by the empty disjunction") {
        auto one = make_structure(sig_p3(), {1}, {{{0}}, {}, {}});
        FormulaPool pool(sig_p3(), PoolBudget{2, 0, 2}, one);
        auto def = find_inequality_definition(one, pool);
        REQUIRE(def.success);
        CHECK(def.disjuncts[0].empty());
    }
    SUBCASE("doubled pair: swaps and label pairs cover inequality") {
        auto u = d2();
        FormulaPool pool(sig_d2(), PoolBudget{2, 0, 2}, u);
        auto def = find_inequality_definition(u, pool);
        REQUIRE(def.success);
        std::set<std::pair<int, int>> covered;
        for (const PosFormula& phi : def.disjuncts[0])
            for (const Tuple& t : solutions(u, phi)) covered.insert({t[0], t[1]});
        CHECK(covered.size() == 12);
    }
    SUBCASE("an empty pool fails with a diagnostic") {
        auto u = u3();
        FormulaPool pool(sig_p3(), PoolBudget{0, 0, 2}, u);
        auto def = find_inequality_definition(u, pool);
        CHECK(!def.success);
        CHECK(def.failure.find("pair") != std::string::npos);
    }
}

TEST_CASE("extract_consequences recovers the disjointness axioms") {
    HuTheory t = extract_consequences(u3(), 2);
    // forbidden patterns: each two-predicate overlap (one element);
    // nothing larger is hom-minimal
    CHECK(t.axioms.size() == 3);
    for (const auto& ax : t.axioms) CHECK(ax.forbidden->total_size() == 1);
    CHECK(is_model(u3(), t));
}

TEST_CASE("hausdorff probe reports per-pair results on the disjoint subsets") {
    auto u = u3();
    FormulaPool pool(sig_p3(), PoolBudget{2, 1, 2}, u);
    auto rep = hausdorff_probe(u, pool);
    CHECK(rep.pairs.size() == 3);
    for (const auto& p : rep.pairs) CHECK(p.rep_a != p.rep_b);
}
