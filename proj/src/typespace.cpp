#include "plcore/typespace.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plcore {

namespace {

PartialMap base_pin(const FinStructure& u, const std::vector<std::vector<char>>& base) {
    PartialMap pin = empty_pin(u);
    for (int st = 0; st < u.num_sorts(); ++st)
        for (int e = 0; e < u.size(st); ++e)
            if (base[st][e]) pin[st][e] = e;
    return pin;
}

std::vector<Hom> compute_base_fixing_endos(StructPtr u, const std::vector<std::vector<char>>& base) {
    return find_hom(u, u, base_pin(*u, base), {});
}

bool one_step(const std::vector<Hom>& endos, const SortedTuple& a, const SortedTuple& b) {
    for (const Hom& h : endos) {
        bool ok = true;
        for (std::size_t i = 0; i < a.elems.size() && ok; ++i)
            if (h.map[a.sorts[i]][a.elems[i]] != b.elems[i]) ok = false;
        if (ok) return true;
    }
    return false;
}

}  // namespace

bool type_equal(StructPtr u, const std::vector<std::vector<char>>& base, const SortedTuple& a,
                const SortedTuple& b) {
    if (a.sorts != b.sorts) throw std::runtime_error("type_equal: tuples of different sorts");
    auto endos = compute_base_fixing_endos(u, base);
    return one_step(endos, a, b) && one_step(endos, b, a);
}

std::vector<std::vector<char>> TypeSpace::full_base(const FinStructure& u) {
    std::vector<std::vector<char>> out(u.num_sorts());
    for (int st = 0; st < u.num_sorts(); ++st) out[st].assign(u.size(st), 1);
    return out;
}

std::vector<std::vector<char>> TypeSpace::empty_base(const FinStructure& u) {
    std::vector<std::vector<char>> out(u.num_sorts());
    for (int st = 0; st < u.num_sorts(); ++st) out[st].assign(u.size(st), 0);
    return out;
}

int TypeSpace::find_type_sort(const std::vector<int>& base_sorts) const {
    for (int i = 0; i < num_type_sorts(); ++i)
        if (sorts_[i].base_sorts == base_sorts) return i;
    return -1;
}

int TypeSpace::class_of(int ts, const Tuple& elems) const {
    auto it = class_index_[ts].find(elems);
    if (it == class_index_[ts].end()) throw std::runtime_error("class_of: tuple not in universe");
    return it->second;
}

TypeSpace TypeSpace::build(StructPtr u, std::vector<std::vector<char>> base, int k) {
    return build(std::move(u), std::move(base), k, Options{});
}

TypeSpace TypeSpace::build(StructPtr u, std::vector<std::vector<char>> base, int k,
                           const Options& opts) {
    if (k < 1) throw std::runtime_error("TypeSpace: k must be at least 1");
    TypeSpace ts;
    ts.u_ = u;
    ts.base_ = std::move(base);
    ts.k_ = k;

    if (opts.require_immersive_base) {
        std::vector<std::vector<int>> keep(u->num_sorts());
        bool empty = true;
        for (int st = 0; st < u->num_sorts(); ++st)
            for (int e = 0; e < u->size(st); ++e)
                if (ts.base_[st][e]) {
                    keep[st].push_back(e);
                    empty = false;
                }
        if (empty) throw std::runtime_error("TypeSpace: empty base is not immersively embedded");
        auto [sub, remap] = induced_substructure(*u, keep);
        Hom inc;
        inc.source = sub;
        inc.target = u;
        inc.map.resize(u->num_sorts());
        for (int st = 0; st < u->num_sorts(); ++st) {
            inc.map[st].assign(sub->size(st), -1);
            for (int e = 0; e < u->size(st); ++e)
                if (remap[st][e] >= 0) inc.map[st][remap[st][e]] = e;
        }
        if (!is_immersion(inc))
            throw std::runtime_error("TypeSpace: base is not immersively embedded");
    }

    ts.endos_ = compute_base_fixing_endos(u, ts.base_);

    // tuple sorts: arity 1..k, lexicographic over base sorts
    int ns = u->num_sorts();
    for (int arity = 1; arity <= k; ++arity) {
        std::vector<int> combo(arity, 0);
        while (true) {
            TypeSort t;
            t.base_sorts = combo;
            std::ostringstream nm;
            nm << "t";
            for (int s : combo) nm << "_" << u->sig().sort_name(s);
            t.name = nm.str();
            ts.sorts_.push_back(std::move(t));
            int i = arity - 1;
            while (i >= 0 && combo[i] == ns - 1) combo[i--] = 0;
            if (i < 0) break;
            ++combo[i];
        }
    }

    ts.reps_.resize(ts.sorts_.size());
    ts.members_.resize(ts.sorts_.size());
    ts.class_index_.resize(ts.sorts_.size());
    for (std::size_t si = 0; si < ts.sorts_.size(); ++si) {
        const auto& bs = ts.sorts_[si].base_sorts;
        int arity = static_cast<int>(bs.size());
        Tuple t(arity, 0);
        bool any_empty = false;
        for (int s : bs)
            if (u->size(s) == 0) any_empty = true;
        if (any_empty) continue;
        while (true) {
            SortedTuple cand{bs, t};
            int cls = -1;
            for (std::size_t c = 0; c < ts.reps_[si].size(); ++c) {
                SortedTuple rep{bs, ts.reps_[si][c]};
                if (one_step(ts.endos_, rep, cand) && one_step(ts.endos_, cand, rep)) {
                    cls = static_cast<int>(c);
                    break;
                }
            }
            if (cls == -1) {
                cls = static_cast<int>(ts.reps_[si].size());
                ts.reps_[si].push_back(t);
                ts.members_[si].emplace_back();
            }
            ts.members_[si][cls].push_back(t);
            ts.class_index_[si][t] = cls;
            int i = arity - 1;
            while (i >= 0 && t[i] == u->size(bs[i]) - 1) t[i--] = 0;
            if (i < 0) break;
            ++t[i];
        }
    }
    return ts;
}

int TypeSpace::project(int tsort, int cls, const std::vector<int>& positions,
                       int* target_sort) const {
    const auto& bs = sorts_[tsort].base_sorts;
    std::vector<int> tsorts;
    Tuple sub;
    for (int p : positions) {
        if (p < 0 || p >= static_cast<int>(bs.size()))
            throw std::runtime_error("project: position out of range");
        tsorts.push_back(bs[p]);
        sub.push_back(reps_[tsort][cls][p]);
    }
    int target = find_type_sort(tsorts);
    if (target < 0) throw std::runtime_error("project: target tuple sort not materialized");
    if (target_sort) *target_sort = target;
    return class_of(target, sub);
}

bool TypeSpace::formula_in_type(const PosFormula& phi, const Tuple& params, int ts,
                                int cls) const {
    Tuple full = reps_[ts][cls];
    full.insert(full.end(), params.begin(), params.end());
    const auto& sols = solutions(u_, phi);
    return std::binary_search(sols.begin(), sols.end(), full);
}

std::vector<Tuple> d_table(const TypeSpace& ts, const Descriptor& d, std::vector<int>* out_sorts) {
    int pa = d.param_arity();
    // argument type sorts
    std::vector<int> arg_sorts;
    for (const PosFormula& phi : d.phis) {
        std::vector<int> fs = phi.free_sorts();
        if (static_cast<int>(fs.size()) < pa + 1)
            throw std::runtime_error("d_table: formula arity below parameter arity");
        std::vector<int> xs(fs.begin(), fs.end() - pa);
        if (pa > 0) {
            std::vector<int> ys(fs.end() - pa, fs.end());
            if (ys != d.alpha->free_sorts())
                throw std::runtime_error("d_table: parameter sorts disagree with alpha");
        }
        int tsort = ts.find_type_sort(xs);
        if (tsort < 0) throw std::runtime_error("d_table: tuple sort not materialized (raise k)");
        arg_sorts.push_back(tsort);
    }
    if (out_sorts) *out_sorts = arg_sorts;

    // parameters: alpha solutions restricted to the base
    std::vector<Tuple> params;
    if (pa == 0) {
        params.push_back({});
    } else {
        const auto& sols = solutions(ts.u(), *d.alpha);
        auto ys = d.alpha->free_sorts();
        for (const Tuple& c : sols) {
            bool in_base = true;
            for (int i = 0; i < pa && in_base; ++i)
                if (!ts.base()[ys[i]][c[i]]) in_base = false;
            if (in_base) params.push_back(c);
        }
    }

    // solution sets once per formula
    std::vector<const std::vector<Tuple>*> sols;
    for (const PosFormula& phi : d.phis) sols.push_back(&solutions(ts.u(), phi));

    int n = static_cast<int>(d.phis.size());
    std::vector<Tuple> table;
    Tuple row(n, 0);
    bool any_empty = false;
    for (int i = 0; i < n; ++i)
        if (ts.num_points(arg_sorts[i]) == 0) any_empty = true;
    if (any_empty) return table;
    while (true) {
        bool all_params_ok = true;
        for (const Tuple& c : params) {
            bool some = false;
            for (int i = 0; i < n && !some; ++i) {
                Tuple full = ts.rep(arg_sorts[i], row[i]);
                full.insert(full.end(), c.begin(), c.end());
                if (std::binary_search(sols[i]->begin(), sols[i]->end(), full)) some = true;
            }
            if (!some) {
                all_params_ok = false;
                break;
            }
        }
        if (all_params_ok) table.push_back(row);
        int i = n - 1;
        while (i >= 0 && row[i] == ts.num_points(arg_sorts[i]) - 1) row[i--] = 0;
        if (i < 0) break;
        ++row[i];
    }
    return table;
}

std::vector<std::vector<int>> restrict_map(const TypeSpace& fine, const TypeSpace& coarse) {
    if (fine.u() != coarse.u() && fine.u()->encoding() != coarse.u()->encoding())
        throw std::runtime_error("restrict_map: different universal models");
    for (int st = 0; st < fine.u()->num_sorts(); ++st)
        for (int e = 0; e < fine.u()->size(st); ++e)
            if (coarse.base()[st][e] && !fine.base()[st][e])
                throw std::runtime_error("restrict_map: coarse base is not contained in fine base");
    if (fine.k() != coarse.k()) throw std::runtime_error("restrict_map: mismatched arity bound");
    std::vector<std::vector<int>> out(fine.num_type_sorts());
    for (int ts = 0; ts < fine.num_type_sorts(); ++ts) {
        out[ts].resize(fine.num_points(ts));
        for (int c = 0; c < fine.num_points(ts); ++c) {
            out[ts][c] = coarse.class_of(ts, fine.rep(ts, c));
            // well-definedness: every member lands in the same coarse class
            for (const Tuple& m : fine.members(ts, c))
                if (coarse.class_of(ts, m) != out[ts][c])
                    throw std::runtime_error("restrict_map: quotient is not coarser");
        }
    }
    return out;
}

PatternStructure pattern_structure(const TypeSpace& ts, const FormulaPool& pool, bool with_pi,
                                   const DescriptorBudget& budget) {
    PatternStructure out;
    std::vector<std::string> sort_names;
    for (int i = 0; i < ts.num_type_sorts(); ++i) sort_names.push_back(ts.type_sort(i).name);
    out.manifest.sort_names = sort_names;
    out.manifest.pool_budget = pool.budget().print();

    std::vector<Relation> rels;
    std::vector<std::vector<Tuple>> tables;
    std::set<std::pair<std::vector<int>, std::vector<Tuple>>> seen;

    auto add_descriptor = [&](const Descriptor& d) {
        std::vector<int> arg_sorts;
        std::vector<Tuple> table = d_table(ts, d, &arg_sorts);
        if (!seen.insert({arg_sorts, table}).second) return;
        DescriptorInfo info;
        info.name = "D" + std::to_string(rels.size());
        info.type_sorts = arg_sorts;
        for (const auto& phi : d.phis) info.phis.push_back(phi.print());
        info.alpha = d.alpha ? d.alpha->print() : std::string();
        rels.push_back({info.name, arg_sorts});
        tables.push_back(std::move(table));
        out.manifest.descriptors.push_back(std::move(info));
        if (rels.size() > budget.max_descriptors)
            throw std::runtime_error("pattern_structure: descriptor budget exceeded");
    };

    // parameter sort combos: arity 0..max_param_arity
    std::vector<std::vector<int>> param_combos = {{}};
    {
        int ns = ts.u()->num_sorts();
        for (int pa = 1; pa <= budget.max_param_arity; ++pa) {
            std::vector<int> combo(pa, 0);
            while (true) {
                param_combos.push_back(combo);
                int i = pa - 1;
                while (i >= 0 && combo[i] == ns - 1) combo[i--] = 0;
                if (i < 0) break;
                ++combo[i];
            }
        }
    }

    for (int n = 1; n <= budget.max_descriptor_arity; ++n) {
        // argument tuple-sort combos
        std::vector<int> args(n, 0);
        while (true) {
            for (const auto& ys : param_combos) {
                std::vector<std::optional<PosFormula>> alphas;
                if (ys.empty()) {
                    alphas.push_back(std::nullopt);
                } else {
                    for (const PosFormula& a : pool.with_free_sorts(ys)) alphas.push_back(a);
                }
                // candidate formulas per argument
                std::vector<const std::vector<PosFormula>*> cand(n);
                bool feasible = true;
                for (int i = 0; i < n; ++i) {
                    std::vector<int> fs = ts.type_sort(args[i]).base_sorts;
                    fs.insert(fs.end(), ys.begin(), ys.end());
                    cand[i] = &pool.with_free_sorts(fs);
                    if (cand[i]->empty()) feasible = false;
                }
                if (!feasible) continue;
                for (const auto& alpha : alphas) {
                    std::vector<std::size_t> pick(n, 0);
                    while (true) {
                        Descriptor d;
                        for (int i = 0; i < n; ++i) d.phis.push_back((*cand[i])[pick[i]]);
                        d.alpha = alpha;
                        add_descriptor(d);
                        int i = n - 1;
                        while (i >= 0 && pick[i] + 1 == cand[i]->size()) pick[i--] = 0;
                        if (i < 0) break;
                        ++pick[i];
                    }
                }
            }
            int i = n - 1;
            while (i >= 0 && args[i] == ts.num_type_sorts() - 1) args[i--] = 0;
            if (i < 0) break;
            ++args[i];
        }
    }

    if (with_pi) {
        for (int tsort = 0; tsort < ts.num_type_sorts(); ++tsort) {
            int arity = static_cast<int>(ts.type_sort(tsort).base_sorts.size());
            if (arity < 2) continue;
            // proper nonempty increasing position subsets
            for (std::uint32_t mask = 1; mask + 1 < (1u << arity); ++mask) {
                std::vector<int> positions;
                for (int p = 0; p < arity; ++p)
                    if (mask & (1u << p)) positions.push_back(p);
                int target = -1;
                {
                    std::vector<int> tsorts;
                    for (int p : positions) tsorts.push_back(ts.type_sort(tsort).base_sorts[p]);
                    target = ts.find_type_sort(tsorts);
                }
                if (target < 0) continue;
                PiInfo pi;
                pi.from_sort = tsort;
                pi.positions = positions;
                pi.to_sort = target;
                std::ostringstream nm;
                nm << "pi_" << tsort;
                for (int p : positions) nm << "_" << p;
                pi.name = nm.str();
                std::vector<Tuple> table;
                for (int c = 0; c < ts.num_points(tsort); ++c)
                    table.push_back({c, ts.project(tsort, c, positions)});
                rels.push_back({pi.name, {tsort, target}});
                tables.push_back(std::move(table));
                out.manifest.pis.push_back(std::move(pi));
            }
        }
    }

    auto sig = std::make_shared<Signature>(sort_names, rels);
    std::vector<int> sizes;
    for (int i = 0; i < ts.num_type_sorts(); ++i) sizes.push_back(ts.num_points(i));
    out.structure = make_structure(sig, sizes, tables);
    return out;
}

Hom conjugate_to_pattern(const TypeSpace& ts, const PatternStructure& ps, const Hom& sigma) {
    Hom h;
    h.source = ps.structure;
    h.target = ps.structure;
    h.map.resize(ts.num_type_sorts());
    for (int tsort = 0; tsort < ts.num_type_sorts(); ++tsort) {
        const auto& bs = ts.type_sort(tsort).base_sorts;
        h.map[tsort].resize(ts.num_points(tsort));
        for (int c = 0; c < ts.num_points(tsort); ++c) {
            Tuple img = ts.rep(tsort, c);
            for (std::size_t i = 0; i < img.size(); ++i) img[i] = sigma.map[bs[i]][img[i]];
            h.map[tsort][c] = ts.class_of(tsort, img);
        }
    }
    return h;
}

}  // namespace plcore
