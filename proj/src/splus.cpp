#include "plcore/splus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "plcore/canonical.hpp"

namespace plcore {

namespace {

// Augments a model with singleton unary marks: one per element of m (for the
// image of the homomorphism) and one per tuple position.
struct AugmentPlan {
    SigPtr aug_sig;
    int base_relations;
};

AugmentPlan make_augment_plan(const FinStructure& m, const std::vector<int>& tuple_sorts) {
    std::vector<Relation> rels = m.sig().relations();
    AugmentPlan plan;
    plan.base_relations = static_cast<int>(rels.size());
    for (int st = 0; st < m.num_sorts(); ++st)
        for (int e = 0; e < m.size(st); ++e)
            rels.push_back({"_img_" + m.sig().sort_name(st) + "_" + std::to_string(e), {st}});
    for (std::size_t j = 0; j < tuple_sorts.size(); ++j)
        rels.push_back({"_pt_" + std::to_string(j), {tuple_sorts[j]}});
    plan.aug_sig = std::make_shared<Signature>(m.sig().sorts(), rels);
    return plan;
}

StructPtr augment(const AugmentPlan& plan, const FinStructure& m, const FinStructure& model,
                  const std::vector<std::vector<int>>& hom, const SortedTuple& tuple) {
    std::vector<std::vector<Tuple>> tables = model.tables();
    tables.resize(plan.aug_sig->num_relations());
    int r = plan.base_relations;
    for (int st = 0; st < m.num_sorts(); ++st)
        for (int e = 0; e < m.size(st); ++e) tables[r++] = {{hom[st][e]}};
    for (std::size_t j = 0; j < tuple.elems.size(); ++j) tables[r++] = {{tuple.elems[j]}};
    return make_structure(plan.aug_sig, model.sizes(), std::move(tables));
}

// Strips the augmented structure back to the base signature and reads the
// marks off the singleton tables.
PointedType strip(const AugmentPlan& plan, const FinStructure& m, StructPtr pointed,
                  const std::vector<int>& tuple_sorts) {
    PointedType pt;
    pt.pointed = pointed;
    std::vector<std::vector<Tuple>> tables(pointed->tables().begin(),
                                           pointed->tables().begin() + plan.base_relations);
    pt.model = make_structure(m.sig_ptr(), pointed->sizes(), std::move(tables));
    int r = plan.base_relations;
    pt.hom.resize(m.num_sorts());
    for (int st = 0; st < m.num_sorts(); ++st) {
        pt.hom[st].resize(m.size(st));
        for (int e = 0; e < m.size(st); ++e) {
            const auto& tb = pointed->table(r++);
            if (tb.size() != 1) throw std::runtime_error("splus: corrupt image mark");
            pt.hom[st][e] = tb[0][0];
        }
    }
    pt.tuple.sorts = tuple_sorts;
    for (std::size_t j = 0; j < tuple_sorts.size(); ++j) {
        const auto& tb = pointed->table(r++);
        if (tb.size() != 1) throw std::runtime_error("splus: corrupt point mark");
        pt.tuple.elems.push_back(tb[0][0]);
    }
    return pt;
}

bool pointed_dominates(const PointedType& a, const PointedType& b) {
    // type of a contained in type of b: pointed homomorphism a -> b
    HomSearchOptions first;
    first.mode = SearchMode::First;
    return !find_hom(a.pointed, b.pointed, empty_pin(*a.pointed), first).empty();
}

}  // namespace

int SPlusSpace::find_sort(const std::vector<int>& base_sorts) const {
    for (std::size_t i = 0; i < sorts.size(); ++i)
        if (sorts[i].base_sorts == base_sorts) return static_cast<int>(i);
    return -1;
}

bool SPlusSpace::formula_in_type(const PosFormula& phi, const Tuple& params, int s,
                                 int cls) const {
    const PointedType& rep = classes[s][cls];
    auto fs = phi.free_sorts();
    Tuple full = rep.tuple.elems;
    int pa = static_cast<int>(params.size());
    int xa = static_cast<int>(fs.size()) - pa;
    if (xa != static_cast<int>(rep.tuple.elems.size()))
        throw std::runtime_error("splus formula_in_type: arity mismatch");
    for (int i = 0; i < pa; ++i) full.push_back(rep.hom[fs[xa + i]][params[i]]);
    const auto& sols = solutions(rep.model, phi);
    return std::binary_search(sols.begin(), sols.end(), full);
}

int SPlusSpace::minimum_class(int s) const {
    for (int c = 0; c < num_points(s); ++c) {
        bool min = true;
        for (int d = 0; d < num_points(s) && min; ++d)
            if (!dominates[s][c][d]) min = false;
        if (min) return c;
    }
    return -1;
}

SPlusSpace build_splus(StructPtr m, const HuTheory& t, int n, int k) {
    if (n < 1) throw std::runtime_error("build_splus: extension bound must be at least 1");
    if (!is_model(m, t)) throw std::runtime_error("build_splus: base is not a model");
    SPlusSpace sp;
    sp.m = m;
    sp.extension_bound = n;
    sp.k = k;

    // models with per-sort sizes up to m_s + n
    int bound = m->max_sort_size() + n;
    std::vector<StructPtr> models;
    for (const StructPtr& cand : enumerate_models(t, bound)) {
        bool ok = true;
        for (int st = 0; st < m->num_sorts(); ++st)
            if (cand->size(st) > m->size(st) + n) ok = false;
        if (ok) models.push_back(cand);
    }

    int ns = m->num_sorts();
    for (int arity = 1; arity <= k; ++arity) {
        std::vector<int> combo(arity, 0);
        while (true) {
            SPlusSpace::Sort s;
            s.base_sorts = combo;
            std::ostringstream nm;
            nm << "t";
            for (int x : combo) nm << "_" << m->sig().sort_name(x);
            s.name = nm.str();
            sp.sorts.push_back(std::move(s));
            int i = arity - 1;
            while (i >= 0 && combo[i] == ns - 1) combo[i--] = 0;
            if (i < 0) break;
            ++combo[i];
        }
    }

    sp.classes.resize(sp.sorts.size());
    sp.dominates.resize(sp.sorts.size());
    for (std::size_t si = 0; si < sp.sorts.size(); ++si) {
        const auto& tuple_sorts = sp.sorts[si].base_sorts;
        AugmentPlan plan = make_augment_plan(*m, tuple_sorts);
        std::set<std::string> raw_seen;
        std::map<std::string, StructPtr> reduced;  // canonical key -> pointed core
        for (const StructPtr& model : models) {
            visit_homs(m, model, empty_pin(*m), false, [&](const Hom& h) {
                // all tuples of the requested sorts
                Tuple tup(tuple_sorts.size(), 0);
                bool empty = false;
                for (int s : tuple_sorts)
                    if (model->size(s) == 0) empty = true;
                if (empty) return true;
                while (true) {
                    SortedTuple point{tuple_sorts, tup};
                    StructPtr aug = augment(plan, *m, *model, h.map, point);
                    if (raw_seen.insert(canonical_form(*aug).key).second) {
                        CoreResult cr = core_of_structure(aug, /*cert_bound=*/0);
                        StructPtr canon = canonicalize(*cr.core);
                        reduced.emplace(canon->encoding(), canon);
                    }
                    int i = static_cast<int>(tup.size()) - 1;
                    while (i >= 0 && tup[i] == model->size(tuple_sorts[i]) - 1) tup[i--] = 0;
                    if (i < 0) break;
                    ++tup[i];
                }
                return true;
            });
        }
        // quotient by mutual domination; keep the smallest representative
        std::vector<PointedType> reps;
        for (const auto& [key, pointed] : reduced) {
            PointedType cand = strip(plan, *m, pointed, tuple_sorts);
            bool merged = false;
            for (PointedType& rep : reps) {
                if (pointed_dominates(cand, rep) && pointed_dominates(rep, cand)) {
                    // keep the smaller (then lexicographically earlier) representative
                    auto better = [&](const PointedType& x, const PointedType& y) {
                        if (x.pointed->total_size() != y.pointed->total_size())
                            return x.pointed->total_size() < y.pointed->total_size();
                        return x.pointed->encoding() < y.pointed->encoding();
                    };
                    if (better(cand, rep)) rep = cand;
                    merged = true;
                    break;
                }
            }
            if (!merged) reps.push_back(std::move(cand));
        }
        std::sort(reps.begin(), reps.end(), [](const PointedType& x, const PointedType& y) {
            if (x.pointed->total_size() != y.pointed->total_size())
                return x.pointed->total_size() < y.pointed->total_size();
            return x.pointed->encoding() < y.pointed->encoding();
        });
        sp.classes[si] = std::move(reps);

        int np = static_cast<int>(sp.classes[si].size());
        sp.dominates[si].assign(np, std::vector<char>(np, 0));
        for (int i = 0; i < np; ++i)
            for (int j = 0; j < np; ++j)
                sp.dominates[si][i][j] =
                    pointed_dominates(sp.classes[si][i], sp.classes[si][j]) ? 1 : 0;
    }
    return sp;
}

std::vector<Tuple> r_table(const SPlusSpace& sp, const Descriptor& d, std::vector<int>* out_sorts) {
    int pa = d.param_arity();
    std::vector<int> arg_sorts;
    for (const PosFormula& phi : d.phis) {
        std::vector<int> fs = phi.free_sorts();
        std::vector<int> xs(fs.begin(), fs.end() - pa);
        int s = sp.find_sort(xs);
        if (s < 0) throw std::runtime_error("r_table: tuple sort not materialized");
        arg_sorts.push_back(s);
    }
    if (out_sorts) *out_sorts = arg_sorts;

    std::vector<Tuple> params;
    if (pa == 0) {
        params.push_back({});
    } else {
        params = solutions(sp.m, *d.alpha);  // the base is m itself
    }

    int n = static_cast<int>(d.phis.size());
    std::vector<Tuple> table;
    for (int i = 0; i < n; ++i)
        if (sp.num_points(arg_sorts[i]) == 0) return table;
    Tuple row(n, 0);
    while (true) {
        bool witness = false;  // some c with every phi_i in p_i
        for (const Tuple& c : params) {
            bool all = true;
            for (int i = 0; i < n && all; ++i)
                if (!sp.formula_in_type(d.phis[i], c, arg_sorts[i], row[i])) all = false;
            if (all) {
                witness = true;
                break;
            }
        }
        if (!witness) table.push_back(row);
        int i = n - 1;
        while (i >= 0 && row[i] == sp.num_points(arg_sorts[i]) - 1) row[i--] = 0;
        if (i < 0) break;
        ++row[i];
    }
    return table;
}

SPlusPattern splus_pattern(const SPlusSpace& sp, const FormulaPool& pool,
                           const DescriptorBudget& budget) {
    SPlusPattern out;
    std::vector<std::string> sort_names;
    for (const auto& s : sp.sorts) sort_names.push_back(s.name);
    out.manifest.sort_names = sort_names;
    out.manifest.pool_budget = pool.budget().print();

    std::vector<Relation> rels;
    std::vector<std::vector<Tuple>> tables;
    std::set<std::pair<std::vector<int>, std::vector<Tuple>>> seen;

    auto add = [&](const Descriptor& d) {
        std::vector<int> arg_sorts;
        std::vector<Tuple> table = r_table(sp, d, &arg_sorts);
        if (!seen.insert({arg_sorts, table}).second) return;
        DescriptorInfo info;
        info.name = "R" + std::to_string(rels.size());
        info.type_sorts = arg_sorts;
        for (const auto& phi : d.phis) info.phis.push_back(phi.print());
        info.alpha = d.alpha ? d.alpha->print() : std::string();
        rels.push_back({info.name, arg_sorts});
        tables.push_back(std::move(table));
        out.manifest.descriptors.push_back(std::move(info));
        if (rels.size() > budget.max_descriptors)
            throw std::runtime_error("splus_pattern: descriptor budget exceeded");
    };

    std::vector<std::vector<int>> param_combos = {{}};
    int ns = sp.m->num_sorts();
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

    for (int n = 1; n <= budget.max_descriptor_arity; ++n) {
        std::vector<int> args(n, 0);
        while (true) {
            for (const auto& ys : param_combos) {
                std::vector<std::optional<PosFormula>> alphas;
                if (ys.empty()) alphas.push_back(std::nullopt);
                else
                    for (const PosFormula& a : pool.with_free_sorts(ys)) alphas.push_back(a);
                std::vector<const std::vector<PosFormula>*> cand(n);
                bool feasible = true;
                for (int i = 0; i < n; ++i) {
                    std::vector<int> fs = sp.sorts[args[i]].base_sorts;
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
                        add(d);
                        int i = n - 1;
                        while (i >= 0 && pick[i] + 1 == cand[i]->size()) pick[i--] = 0;
                        if (i < 0) break;
                        ++pick[i];
                    }
                }
            }
            int i = n - 1;
            while (i >= 0 && args[i] == static_cast<int>(sp.sorts.size()) - 1) args[i--] = 0;
            if (i < 0) break;
            ++args[i];
        }
    }

    auto sig = std::make_shared<Signature>(sort_names, rels);
    std::vector<int> sizes;
    for (std::size_t i = 0; i < sp.sorts.size(); ++i)
        sizes.push_back(sp.num_points(static_cast<int>(i)));
    out.structure = make_structure(sig, sizes, tables);
    return out;
}

SPlusCoreResult splus_core(const SPlusSpace& sp, const FormulaPool& pool,
                           const DescriptorBudget& budget) {
    SPlusCoreResult res;
    res.pattern = splus_pattern(sp, pool, budget);
    CoreResult cr = core_of_structure(res.pattern.structure, /*cert_bound=*/0);
    res.core = cr.core;
    res.core_sizes = cr.core->sizes();
    return res;
}

}  // namespace plcore
