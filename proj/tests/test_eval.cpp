#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "plcore/eval.hpp"
#include "plcore/pool.hpp"

using namespace plcore;
using namespace plcore::fixtures;

TEST_CASE("holds on the disjoint-subsets model") {
    auto u = u3();
    SigPtr sig = sig_p3();
    CHECK(holds(u, parse_positive(sig, "P0(x)"), {{"x", 0}}));
    CHECK(!holds(u, parse_positive(sig, "P0(x)"), {{"x", 1}}));
    CHECK(!holds_at(u, parse_positive(sig, "exists x. P0(x) & P1(x)"), {}));
    CHECK(holds_at(u, parse_positive(sig, "exists x. P0(x)"), {}));
}

TEST_CASE("holds rejects bad assignments") {
    auto u = u3();
    PosFormula phi = parse_positive(sig_p3(), "P0(x)");
    CHECK_THROWS(holds(u, phi, {}));                       // missing
    CHECK_THROWS(holds(u, phi, {{"x", 0}, {"y", 1}}));     // extra
    CHECK_THROWS(holds(u, phi, {{"x", 9}}));               // out of range
}

TEST_CASE("no midpoint witness in a single edge") {
    auto e = digraph(2, {{0, 1}});
    PosFormula phi = parse_positive(sig_digraph(), "exists z. E(x,z) & E(z,y)");
    CHECK(!holds(e, phi, {{"x", 0}, {"y", 1}}));
}

TEST_CASE("solution sets") {
    auto u = u3();
    SigPtr sig = sig_p3();
    CHECK(solutions(u, parse_positive(sig, "P1(x)")) == std::vector<Tuple>{{1}});
    CHECK(solutions(u, parse_positive(sig, "x = x")) == std::vector<Tuple>{{0}, {1}, {2}});
    auto e = digraph(2, {{0, 1}});
    CHECK(solutions(e, parse_positive(sig_digraph(), "exists y. E(x,y)")) ==
          std::vector<Tuple>{{0}});
}

TEST_CASE("engine evaluation agrees with the naive Tarski oracle") {
    SigPtr sig = sig_digraph();
    auto ref = digraph(3, {{0, 1}, {1, 2}, {0, 2}});
    FormulaPool pool(sig, PoolBudget{2, 1, 2}, ref);
    std::vector<StructPtr> insts;
    for (int n = 1; n <= 3; ++n) {
        int cells = n * n;
        for (int mask = 0; mask < (1 << cells); mask += (n == 3 ? 13 : 1)) {
            std::vector<Tuple> edges;
            for (int c = 0; c < cells; ++c)
                if (mask & (1 << c)) edges.push_back({c / n, c % n});
            insts.push_back(digraph(n, edges));
        }
    }
    for (const auto& sorts : pool.free_sort_tuples(1))
        for (const PosFormula& phi : pool.with_free_sorts(sorts))
            for (const auto& m : insts)
                CHECK(solutions(m, phi) == oracles::naive_solutions(*m, phi));
}

TEST_CASE("positive formulas are monotone under homomorphisms") {
    SigPtr sig = sig_digraph();
    auto ref = digraph(3, {{0, 1}, {1, 2}, {0, 2}});
    FormulaPool pool(sig, PoolBudget{2, 1, 1}, ref);
    std::vector<StructPtr> insts;
    for (int mask = 0; mask < (1 << 9); mask += 17) {
        std::vector<Tuple> edges;
        for (int c = 0; c < 9; ++c)
            if (mask & (1 << c)) edges.push_back({c / 3, c % 3});
        insts.push_back(digraph(3, edges));
    }
    for (const auto& m : insts)
        for (const auto& n : insts)
            for (const Hom& h : find_hom(m, n, empty_pin(*m), {})) {
                for (const PosFormula& phi : pool.with_free_sorts({0}))
                    for (const Tuple& t : solutions(m, phi))
                        CHECK(holds_at(n, phi, {h.map[0][t[0]]}));
            }
}
