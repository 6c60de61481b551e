#pragma once

// Test-only reference implementations, kept independent of the engine paths
// they check: a direct recursive Tarski evaluator and raw enumeration of all
// maps between structures.

#include <map>
#include <string>
#include <vector>

#include "plcore/formula.hpp"
#include "plcore/structure.hpp"

namespace plcore::oracles {

inline bool naive_eval(const PosFormula& f, const FinStructure& m, int node,
                       std::map<std::string, int>& env) {
    const auto& n = f.nodes()[node];
    switch (n.kind) {
        case PosFormula::Kind::Atom: {
            Tuple t;
            for (int a : n.args) t.push_back(env.at(f.vars()[a].name));
            return m.has(n.rel, t);
        }
        case PosFormula::Kind::Eq:
            return env.at(f.vars()[n.args[0]].name) == env.at(f.vars()[n.args[1]].name);
        case PosFormula::Kind::And:
            for (int k : n.kids)
                if (!naive_eval(f, m, k, env)) return false;
            return true;
        case PosFormula::Kind::Or:
            for (int k : n.kids)
                if (naive_eval(f, m, k, env)) return true;
            return false;
        case PosFormula::Kind::Exists: {
            // iterate assignments of the bound variables recursively
            std::vector<int> idx(n.bound.size(), 0);
            for (int b : n.bound)
                if (m.size(f.vars()[b].sort) == 0) return false;
            while (true) {
                for (std::size_t i = 0; i < n.bound.size(); ++i)
                    env[f.vars()[n.bound[i]].name] = idx[i];
                if (naive_eval(f, m, n.body, env)) {
                    for (int b : n.bound) env.erase(f.vars()[b].name);
                    return true;
                }
                int i = static_cast<int>(idx.size()) - 1;
                while (i >= 0 && idx[i] == m.size(f.vars()[n.bound[i]].sort) - 1) idx[i--] = 0;
                if (i < 0) break;
                ++idx[i];
            }
            for (int b : n.bound) env.erase(f.vars()[b].name);
            return false;
        }
    }
    return false;
}

inline bool naive_holds(const FinStructure& m, const PosFormula& phi, const Tuple& tuple) {
    std::map<std::string, int> env;
    for (std::size_t i = 0; i < phi.free().size(); ++i)
        env[phi.vars()[phi.free()[i]].name] = tuple[i];
    return naive_eval(phi, m, phi.root(), env);
}

inline std::vector<Tuple> naive_solutions(const FinStructure& m, const PosFormula& phi) {
    std::vector<Tuple> out;
    auto fs = phi.free_sorts();
    for (int s : fs)
        if (m.size(s) == 0) return out;
    Tuple t(fs.size(), 0);
    if (fs.empty()) {
        if (naive_holds(m, phi, {})) out.push_back({});
        return out;
    }
    while (true) {
        if (naive_holds(m, phi, t)) out.push_back(t);
        int i = static_cast<int>(t.size()) - 1;
        while (i >= 0 && t[i] == m.size(fs[i]) - 1) t[i--] = 0;
        if (i < 0) break;
        ++t[i];
    }
    return out;
}

// Every map between the universes, checked tuple by tuple.
inline std::vector<std::vector<std::vector<int>>> naive_all_homs(const FinStructure& a,
                                                                 const FinStructure& b) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::pair<int, int>> flat;
    for (int st = 0; st < a.num_sorts(); ++st)
        for (int e = 0; e < a.size(st); ++e) flat.push_back({st, e});
    for (int st = 0; st < a.num_sorts(); ++st)
        if (a.size(st) > 0 && b.size(st) == 0) return out;
    std::vector<std::vector<int>> h(a.num_sorts());
    for (int st = 0; st < a.num_sorts(); ++st) h[st].assign(a.size(st), 0);
    auto is_hom = [&]() {
        for (int r = 0; r < a.sig().num_relations(); ++r) {
            const Relation& rel = a.sig().relation(r);
            for (const Tuple& t : a.table(r)) {
                Tuple img(t.size());
                for (std::size_t p = 0; p < t.size(); ++p) img[p] = h[rel.arity[p]][t[p]];
                if (!b.has(r, img)) return false;
            }
        }
        return true;
    };
    if (flat.empty()) {
        if (is_hom()) out.push_back(h);
        return out;
    }
    while (true) {
        if (is_hom()) out.push_back(h);
        int i = static_cast<int>(flat.size()) - 1;
        while (i >= 0 && h[flat[i].first][flat[i].second] == b.size(flat[i].first) - 1) {
            h[flat[i].first][flat[i].second] = 0;
            --i;
        }
        if (i < 0) break;
        ++h[flat[i].first][flat[i].second];
    }
    return out;
}

}  // namespace plcore::oracles
