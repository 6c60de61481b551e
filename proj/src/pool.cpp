#include "plcore/pool.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plcore {

PoolBudget PoolBudget::parse(const std::string& spec) {
    PoolBudget b;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::runtime_error("bad pool spec item: " + item);
        std::string key = item.substr(0, colon);
        int val = std::stoi(item.substr(colon + 1));
        if (key == "atoms") b.max_atoms = val;
        else if (key == "bvars") b.max_bound_vars = val;
        else if (key == "arity") b.max_free_arity = val;
        else throw std::runtime_error("bad pool spec key: " + key);
    }
    return b;
}

std::string PoolBudget::print() const {
    std::ostringstream os;
    os << "atoms:" << max_atoms << ",bvars:" << max_bound_vars << ",arity:" << max_free_arity;
    return os.str();
}

FormulaPool::FormulaPool(SigPtr sig, PoolBudget budget, StructPtr dedup_ref)
    : sig_(std::move(sig)), budget_(budget), ref_(std::move(dedup_ref)) {}

std::vector<std::vector<int>> FormulaPool::free_sort_tuples(int min_arity) const {
    std::vector<std::vector<int>> out;
    int ns = sig_->num_sorts();
    for (int arity = min_arity; arity <= budget_.max_free_arity; ++arity) {
        std::vector<int> t(arity, 0);
        while (true) {
            out.push_back(t);
            int i = arity - 1;
            while (i >= 0 && t[i] == ns - 1) t[i--] = 0;
            if (i < 0) break;
            ++t[i];
        }
    }
    return out;
}

const std::vector<PosFormula>& FormulaPool::with_free_sorts(
    const std::vector<int>& free_sorts) const {
    auto it = by_sorts_.find(free_sorts);
    if (it != by_sorts_.end()) return it->second;
    auto [ins, _] = by_sorts_.emplace(free_sorts, enumerate(free_sorts));
    return ins->second;
}

std::vector<PosFormula> FormulaPool::enumerate(const std::vector<int>& free_sorts) const {
    std::vector<PosFormula> out;
    std::set<std::pair<std::vector<int>, std::vector<Tuple>>> seen;  // (sorts, solution set)

    int ns = sig_->num_sorts();
    int f = static_cast<int>(free_sorts.size());

    for (int bb = 0; bb <= budget_.max_bound_vars; ++bb) {
        // bound sort combos, non-decreasing
        std::vector<std::vector<int>> bound_combos;
        std::vector<int> combo(bb, 0);
        while (true) {
            if (std::is_sorted(combo.begin(), combo.end())) bound_combos.push_back(combo);
            if (bb == 0) break;
            int i = bb - 1;
            while (i >= 0 && combo[i] == ns - 1) combo[i--] = 0;
            if (i < 0) break;
            ++combo[i];
        }
        if (bb == 0) bound_combos = {{}};

        for (const auto& bsorts : bound_combos) {
            PPFormula proto;
            proto.sig = sig_;
            for (int i = 0; i < f; ++i) {
                proto.free.push_back(static_cast<int>(proto.vars.size()));
                proto.vars.push_back({"x" + std::to_string(i), free_sorts[i]});
            }
            for (int i = 0; i < bb; ++i) {
                proto.bound.push_back(static_cast<int>(proto.vars.size()));
                proto.vars.push_back({"b" + std::to_string(i), bsorts[i]});
            }
            int nv = static_cast<int>(proto.vars.size());

            // candidate atoms over these variables
            struct Cand {
                bool is_eq;
                PPAtom atom;
                std::pair<int, int> eq;
            };
            std::vector<Cand> cands;
            for (int r = 0; r < sig_->num_relations(); ++r) {
                const Relation& rel = sig_->relation(r);
                std::vector<std::vector<int>> per_pos(rel.arity.size());
                for (std::size_t p = 0; p < rel.arity.size(); ++p)
                    for (int v = 0; v < nv; ++v)
                        if (proto.vars[v].sort == rel.arity[p]) per_pos[p].push_back(v);
                std::vector<int> idx(rel.arity.size(), 0);
                bool any_empty = false;
                for (const auto& pp : per_pos)
                    if (pp.empty()) any_empty = true;
                if (any_empty) continue;
                while (true) {
                    PPAtom a;
                    a.rel = r;
                    for (std::size_t p = 0; p < idx.size(); ++p) a.args.push_back(per_pos[p][idx[p]]);
                    cands.push_back({false, a, {}});
                    int i = static_cast<int>(idx.size()) - 1;
                    while (i >= 0 && idx[i] + 1 == static_cast<int>(per_pos[i].size())) idx[i--] = 0;
                    if (i < 0) break;
                    ++idx[i];
                }
            }
            for (int v = 0; v < nv; ++v)
                for (int w = v + 1; w < nv; ++w)
                    if (proto.vars[v].sort == proto.vars[w].sort)
                        cands.push_back({true, {}, {v, w}});
            // self-equalities on free variables give the always-true formulas
            for (int i = 0; i < f; ++i) cands.push_back({true, {}, {proto.free[i], proto.free[i]}});

            int nc = static_cast<int>(cands.size());
            for (int k = 1; k <= budget_.max_atoms && k <= nc; ++k) {
                std::vector<int> pick(k);
                for (int i = 0; i < k; ++i) pick[i] = i;
                while (true) {
                    // every bound variable must occur in some chosen atom
                    std::vector<char> used(nv, 0);
                    for (int ci : pick) {
                        const Cand& c = cands[ci];
                        if (c.is_eq) {
                            used[c.eq.first] = used[c.eq.second] = 1;
                        } else {
                            for (int v : c.atom.args) used[v] = 1;
                        }
                    }
                    bool all_bound_used = true;
                    for (int b : proto.bound)
                        if (!used[b]) all_bound_used = false;
                    if (all_bound_used) {
                        PPFormula pp = proto;
                        for (int ci : pick) {
                            const Cand& c = cands[ci];
                            if (c.is_eq) pp.eqs.push_back(c.eq);
                            else pp.atoms.push_back(c.atom);
                        }
                        PosFormula formula = pp.to_formula();
                        auto key = std::make_pair(free_sorts, solutions(ref_, formula));
                        if (seen.insert(key).second) out.push_back(std::move(formula));
                    }
                    int i = k - 1;
                    while (i >= 0 && pick[i] == nc - (k - i)) --i;
                    if (i < 0) break;
                    ++pick[i];
                    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                }
            }
        }
    }
    return out;
}

std::string FormulaPool::listing() const {
    std::ostringstream os;
    for (const auto& sorts : free_sort_tuples(1)) {
        os << "[";
        for (std::size_t i = 0; i < sorts.size(); ++i) {
            if (i) os << ',';
            os << sig_->sort_name(sorts[i]);
        }
        os << "]\n";
        for (const auto& phi : with_free_sorts(sorts)) os << "  " << phi.print() << '\n';
    }
    return os.str();
}

}  // namespace plcore
