#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "plcore/typespace.hpp"

using namespace plcore;
using namespace plcore::fixtures;

namespace {

TypeSpace::Options relaxed() {
    TypeSpace::Options o;
    o.require_immersive_base = false;
    return o;
}

}  // namespace

TEST_CASE("type_equal") {
    auto u = d2();
    SUBCASE("a tuple equals itself") {
        CHECK(type_equal(u, TypeSpace::empty_base(*u), {{0}, {0}}, {{0}, {0}}));
    }
    SUBCASE("the swap automorphism merges the paired points over the empty base") {
        CHECK(type_equal(u, TypeSpace::empty_base(*u), {{0}, {0}}, {{0}, {1}}));
        CHECK(!type_equal(u, TypeSpace::empty_base(*u), {{0}, {0}}, {{0}, {2}}));
    }
    SUBCASE("over the full base only equal tuples are equivalent") {
        auto u3m = u3();
        CHECK(!type_equal(u3m, TypeSpace::full_base(*u3m), {{0}, {0}}, {{0}, {1}}));
    }
    SUBCASE("tuples of different sorts are rejected") {
        CHECK_THROWS(type_equal(u, TypeSpace::empty_base(*u), {{0}, {0}}, {{0, 0}, {0, 1}}));
    }
}

TEST_CASE("type space quotients") {
    SUBCASE("disjoint subsets over the full base have one type per element") {
        auto u = u3();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 1);
        CHECK(ts.num_type_sorts() == 1);
        CHECK(ts.num_points(0) == 3);
    }
    SUBCASE("doubled pair over the full base: four unary types") {
        auto u = d2();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 1);
        CHECK(ts.num_points(0) == 4);
    }
    SUBCASE("doubled pair over one label pair: the other pair merges") {
        auto u = d2();
        auto base = TypeSpace::empty_base(*u);
        base[0][0] = base[0][1] = 1;
        TypeSpace ts = TypeSpace::build(u, base, 1, relaxed());
        CHECK(ts.num_points(0) == 3);
        CHECK(ts.class_of(0, {2}) == ts.class_of(0, {3}));
        CHECK(ts.class_of(0, {0}) != ts.class_of(0, {1}));
    }
    SUBCASE("the one-label-pair base is not immersively embedded") {
        auto u = d2();
        auto base = TypeSpace::empty_base(*u);
        base[0][0] = base[0][1] = 1;
        CHECK_THROWS(TypeSpace::build(u, base, 1));
    }
    SUBCASE("classes partition every tuple power") {
        auto u = d2();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::empty_base(*u), 2, relaxed());
        for (int s = 0; s < ts.num_type_sorts(); ++s) {
            int total = 0;
            for (int c = 0; c < ts.num_points(s); ++c)
                total += static_cast<int>(ts.members(s, c).size());
            int expect = 1;
            for (int bs : ts.type_sort(s).base_sorts) expect *= u->size(bs);
            CHECK(total == expect);
        }
    }
    SUBCASE("one-sided reachability already implies equivalence here") {
        auto u = d2();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 2);
        const auto& endos = ts.base_fixing_endos();
        for (int s = 0; s < ts.num_type_sorts(); ++s) {
            const auto& bs = ts.type_sort(s).base_sorts;
            for (int c = 0; c < ts.num_points(s); ++c)
                for (int d = 0; d < ts.num_points(s); ++d) {
                    bool one_way = false;
                    for (const Hom& h : endos) {
                        Tuple img = ts.rep(s, c);
                        for (std::size_t i = 0; i < img.size(); ++i)
                            img[i] = h.map[bs[i]][img[i]];
                        if (img == ts.rep(s, d)) one_way = true;
                    }
                    if (one_way) CHECK(c == d);
                }
        }
    }
}

TEST_CASE("the element-to-type map is a bijection over the full base") {
    auto u = d2();
    TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 2);
    for (int s = 0; s < ts.num_type_sorts(); ++s) {
        int expect = 1;
        for (int bs : ts.type_sort(s).base_sorts) expect *= u->size(bs);
        CHECK(ts.num_points(s) == expect);
        for (int c = 0; c < ts.num_points(s); ++c) CHECK(ts.members(s, c).size() == 1);
    }
}

TEST_CASE("formula_in_type") {
    auto u = u3();
    TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 1);
    SigPtr sig = sig_p3();
    SUBCASE("x = c is in the type of c") {
        PosFormula eq = parse_positive(sig, "x = y");
        for (int e = 0; e < 3; ++e) {
            CHECK(ts.formula_in_type(eq, {e}, 0, ts.class_of(0, {e})));
            CHECK(!ts.formula_in_type(eq, {(e + 1) % 3}, 0, ts.class_of(0, {e})));
        }
    }
    SUBCASE("P0 belongs only to the type of 0") {
        PosFormula p0 = parse_positive(sig, "P0(x)");
        CHECK(ts.formula_in_type(p0, {}, 0, ts.class_of(0, {0})));
        CHECK(!ts.formula_in_type(p0, {}, 0, ts.class_of(0, {1})));
    }
}

TEST_CASE("pattern relations on the disjoint-subsets type space") {
    auto u = u3();
    TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 1);
    SigPtr sig = sig_p3();
    SUBCASE("equality against a predicate-ranged parameter") {
        Descriptor d;
        d.phis = {parse_positive(sig, "x = y")};
        d.alpha = parse_positive(sig, "P0(y)");
        auto table = d_table(ts, d, nullptr);
        REQUIRE(table.size() == 1);
        CHECK(table[0][0] == ts.class_of(0, {0}));
    }
    SUBCASE("an empty parameter range makes the relation total") {
        Descriptor d;
        d.phis = {parse_positive(sig, "x = y")};
        d.alpha = parse_positive(sig, "P0(y) & P1(y)");  // unsatisfiable
        CHECK(d_table(ts, d, nullptr).size() == 3);
    }
    SUBCASE("a parameter-free predicate descriptor") {
        Descriptor d;
        PosFormula p0 = parse_positive(sig, "P0(x)");
        d.phis = {p0};
        auto table = d_table(ts, d, nullptr);
        REQUIRE(table.size() == 1);
        CHECK(table[0][0] == ts.class_of(0, {0}));
    }
    SUBCASE("membership of a disjunction matches the per-disjunct check") {
        PosFormula p0 = parse_positive(sig, "P0(x)");
        PosFormula p1 = parse_positive(sig, "P1(x)");
        Descriptor merged;
        merged.phis = {PosFormula::disj({p0, p1})};
        Descriptor split;
        split.phis = {p0, p1};
        auto tm = d_table(ts, merged, nullptr);
        auto tsp = d_table(ts, split, nullptr);
        std::set<Tuple> diag;
        for (const Tuple& t : tsp)
            if (t[0] == t[1]) diag.insert({t[0]});
        CHECK(std::set<Tuple>(tm.begin(), tm.end()) == diag);
    }
}

TEST_CASE("projections") {
    auto u = u3();
    TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 2);
    int pair_sort = ts.find_type_sort({0, 0});
    REQUIRE(pair_sort >= 0);
    SUBCASE("projecting to all positions is the identity") {
        for (int c = 0; c < ts.num_points(pair_sort); ++c)
            CHECK(ts.project(pair_sort, c, {0, 1}) == c);
    }
    SUBCASE("projections pick components") {
        int c = ts.class_of(pair_sort, {0, 1});
        CHECK(ts.project(pair_sort, c, {0}) == ts.class_of(0, {0}));
        CHECK(ts.project(pair_sort, c, {1}) == ts.class_of(0, {1}));
    }
    SUBCASE("lifted descriptors commute with projection") {
        SigPtr sig = sig_p3();
        PosFormula p0x = parse_positive(sig, "P0(x)");
        Descriptor base_d;
        base_d.phis = {p0x};
        auto base_table = d_table(ts, base_d, nullptr);
        std::set<int> base_set;
        for (const Tuple& t : base_table) base_set.insert(t[0]);
        // the same predicate lifted to the pair sort via a padded variable
        PosFormula pad = parse_positive(sig, "P0(x0) & x1 = x1");
        Descriptor lift_d;
        lift_d.phis = {pad};
        auto lift_table = d_table(ts, lift_d, nullptr);
        std::set<int> lift_set;
        for (const Tuple& t : lift_table) lift_set.insert(t[0]);
        for (int c = 0; c < ts.num_points(pair_sort); ++c) {
            bool in_lift = lift_set.count(c) > 0;
            bool in_base = base_set.count(ts.project(pair_sort, c, {0})) > 0;
            CHECK(in_lift == in_base);
        }
    }
}

TEST_CASE("restriction maps") {
    auto u = d2();
    auto full = TypeSpace::full_base(*u);
    SUBCASE("restricting to the same base is the identity") {
        TypeSpace ts = TypeSpace::build(u, full, 1);
        auto r = restrict_map(ts, ts);
        for (int c = 0; c < ts.num_points(0); ++c) CHECK(r[0][c] == c);
    }
    SUBCASE("shrinking the base merges the unlabeled pair of types") {
        TypeSpace fine = TypeSpace::build(u, full, 1);
        auto base = TypeSpace::empty_base(*u);
        base[0][0] = base[0][1] = 1;
        TypeSpace coarse = TypeSpace::build(u, base, 1, relaxed());
        auto r = restrict_map(fine, coarse);
        CHECK(r[0][fine.class_of(0, {2})] == r[0][fine.class_of(0, {3})]);
        CHECK(r[0][fine.class_of(0, {0})] != r[0][fine.class_of(0, {1})]);
    }
    SUBCASE("restriction is a homomorphism for generated descriptors") {
        TypeSpace fine = TypeSpace::build(u, full, 1);
        auto base = TypeSpace::empty_base(*u);
        base[0][0] = base[0][1] = 1;
        TypeSpace coarse = TypeSpace::build(u, base, 1, relaxed());
        auto r = restrict_map(fine, coarse);
        FormulaPool pool(sig_d2(), PoolBudget{2, 1, 1}, u);
        for (const PosFormula& phi : pool.with_free_sorts({0, 0}))
            for (const PosFormula& alpha : pool.with_free_sorts({0})) {
                Descriptor d;
                d.phis = {phi};
                d.alpha = alpha;
                auto tf = d_table(fine, d, nullptr);
                auto tc = d_table(coarse, d, nullptr);
                std::set<Tuple> coarse_set(tc.begin(), tc.end());
                for (const Tuple& row : tf) CHECK(coarse_set.count({r[0][row[0]]}) == 1);
            }
    }
    SUBCASE("restriction commutes with projection") {
        TypeSpace fine = TypeSpace::build(u, full, 2);
        auto base = TypeSpace::empty_base(*u);
        base[0][0] = base[0][1] = 1;
        TypeSpace coarse = TypeSpace::build(u, base, 2, relaxed());
        auto r = restrict_map(fine, coarse);
        int ps = fine.find_type_sort({0, 0});
        for (int c = 0; c < fine.num_points(ps); ++c) {
            int via_fine = r[0][fine.project(ps, c, {0})];
            int via_coarse = coarse.project(ps, r[ps][c], {0});
            CHECK(via_fine == via_coarse);
        }
    }
}

TEST_CASE("pattern structures") {
    SUBCASE("unary pool distinguishes the disjoint-subsets types") {
        auto u = u3();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 1);
        FormulaPool pool(sig_p3(), PoolBudget{1, 0, 1}, u);
        PatternStructure ps = pattern_structure(ts, pool, false);
        CHECK(ps.structure->size(0) == 3);
        CHECK(validate_structure(*ps.structure).empty());
        std::set<std::vector<bool>> profiles;
        for (int e = 0; e < 3; ++e) {
            std::vector<bool> prof;
            for (int r = 0; r < ps.structure->sig().num_relations(); ++r)
                if (ps.structure->sig().relation(r).arity.size() == 1)
                    prof.push_back(ps.structure->has(r, {e}));
            profiles.insert(prof);
        }
        CHECK(profiles.size() == 3);
    }
    SUBCASE("an empty pool yields no relations") {
        auto u = u3();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 1);
        FormulaPool pool(sig_p3(), PoolBudget{0, 0, 1}, u);
        PatternStructure ps = pattern_structure(ts, pool, false);
        CHECK(ps.structure->sig().num_relations() == 0);
    }
    SUBCASE("doubled pair with projections validates") {
        auto u = d2();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 2);
        FormulaPool pool(sig_d2(), PoolBudget{1, 0, 1}, u);
        PatternStructure ps = pattern_structure(ts, pool, true);
        CHECK(ps.structure->size(0) == 4);
        CHECK(ps.structure->size(1) == 16);
        CHECK(validate_structure(*ps.structure).empty());
        CHECK(ps.manifest.pis.size() == 2);
        for (const auto& pi : ps.manifest.pis) {
            int rel = ps.structure->sig().relation_index(pi.name);
            std::set<int> dom;
            for (const Tuple& t : ps.structure->table(rel)) dom.insert(t[0]);
            CHECK(static_cast<int>(ps.structure->table(rel).size()) ==
                  ps.structure->size(pi.from_sort));
            CHECK(static_cast<int>(dom.size()) == ps.structure->size(pi.from_sort));
        }
    }
    SUBCASE("tables under a grown pool restrict to the smaller pool's tables") {
        auto u = u3();
        TypeSpace ts = TypeSpace::build(u, TypeSpace::full_base(*u), 1);
        FormulaPool small(sig_p3(), PoolBudget{1, 0, 1}, u);
        FormulaPool big(sig_p3(), PoolBudget{2, 1, 1}, u);
        PatternStructure pss = pattern_structure(ts, small, false);
        PatternStructure psb = pattern_structure(ts, big, false);
        for (std::size_t i = 0; i < pss.manifest.descriptors.size(); ++i) {
            const auto& info = pss.manifest.descriptors[i];
            bool found = false;
            for (std::size_t j = 0; j < psb.manifest.descriptors.size(); ++j) {
                const auto& cand = psb.manifest.descriptors[j];
                if (cand.phis == info.phis && cand.alpha == info.alpha &&
                    cand.type_sorts == info.type_sorts)
                    found = psb.structure->table(static_cast<int>(j)) ==
                            pss.structure->table(static_cast<int>(i));
            }
            CHECK(found);
        }
    }
}
