#include "plcore/corecalc.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plcore {

CoreOfTResult core_of_T(StructPtr u, const HuTheory* t, const FormulaPool& pool, int k,
                        bool with_pi, const DescriptorBudget& budget) {
    CoreOfTResult res{TypeSpace::build(u, TypeSpace::full_base(*u), k), {}, nullptr, {}, {}};
    res.u_certified = certify_universal_for_own_theory(u);
    if (!res.u_certified)
        throw std::runtime_error("core_of_T: u has a non-injective endomorphism; it is not the "
                                 "universal model of any theory");
    if (t) {
        res.u_is_model = is_model(u, *t);
        if (!res.u_is_model) throw std::runtime_error("core_of_T: u does not satisfy the theory");
    }
    res.pattern = pattern_structure(res.space, pool, with_pi, budget);
    CoreResult cr = core_of_structure(res.pattern.structure, /*cert_bound=*/0);
    res.core = cr.core;
    res.retraction = cr.retraction;
    res.embedding = cr.embedding;
    res.self_core = res.core->sizes() == res.pattern.structure->sizes();
    return res;
}

AutCompareReport aut_compare(StructPtr u, const TypeSpace& ts, const PatternStructure& ps) {
    AutCompareReport rep;
    std::vector<Hom> auts_u = automorphisms(u);
    std::vector<Hom> auts_p = automorphisms(ps.structure);
    rep.aut_u = auts_u.size();
    rep.aut_pattern = auts_p.size();

    auto key = [](const Hom& h) { return h.map; };
    std::set<std::vector<std::vector<int>>> pattern_maps;
    for (const Hom& h : auts_p) pattern_maps.insert(key(h));

    std::set<std::vector<std::vector<int>>> image;
    bool ok = auts_u.size() == auts_p.size();
    std::vector<Hom> conj;
    for (const Hom& s : auts_u) {
        Hom c = conjugate_to_pattern(ts, ps, s);
        if (!pattern_maps.count(key(c))) ok = false;
        if (!image.insert(key(c)).second) ok = false;  // not injective
        conj.push_back(c);
    }
    // group homomorphism: conj(s1 ∘ s2) == conj(s1) ∘ conj(s2)
    for (std::size_t i = 0; i < auts_u.size() && ok; ++i)
        for (std::size_t j = 0; j < auts_u.size() && ok; ++j) {
            Hom lhs = conjugate_to_pattern(ts, ps, compose(auts_u[i], auts_u[j]));
            Hom rhs = compose(conj[i], conj[j]);
            if (key(lhs) != key(rhs)) ok = false;
        }
    rep.conjugation_is_isomorphism = ok;
    std::ostringstream os;
    os << "|Aut(U)| = " << rep.aut_u << ", |Aut(S(U))| = " << rep.aut_pattern
       << (ok ? "; conjugation is a group isomorphism" : "; conjugation FAILED");
    rep.detail = os.str();
    return rep;
}

namespace {

// pu consequences of the structure within a pool: closed pool formulas with
// empty solution set, kept hom-minimal as forbidden structures.
HuTheory extract_pool_consequences(StructPtr c, const FormulaPool& pool) {
    HomSearchOptions first;
    first.mode = SearchMode::First;
    std::vector<StructPtr> kept;
    std::vector<HuSentence> sentences;
    for (const auto& sorts : pool.free_sort_tuples(1)) {
        for (const PosFormula& phi : pool.with_free_sorts(sorts)) {
            if (!solutions(c, phi).empty()) continue;
            auto nfs = pp_normal_form(phi);
            if (nfs.size() != 1) continue;
            PPFormula pp = nfs[0];
            pp.bound.insert(pp.bound.begin(), pp.free.begin(), pp.free.end());
            pp.free.clear();
            auto [forbidden, marked] = structure_of_pp(pp);
            (void)marked;
            bool redundant = false;
            for (const StructPtr& prev : kept)
                if (!find_hom(prev, forbidden, empty_pin(*prev), first).empty()) {
                    redundant = true;
                    break;
                }
            if (redundant) continue;
            kept.push_back(forbidden);
            HuSentence s;
            s.matrix = std::move(pp);
            sentences.push_back(std::move(s));
        }
    }
    return HuTheory::from_sentences(c->sig_ptr(), sentences);
}

}  // namespace

RepeatedCoreReport repeated_core_check(const CoreOfTResult& first, const PoolBudget& pool2,
                                       int consequence_window) {
    RepeatedCoreReport rep;
    StructPtr c = first.core;
    rep.first_sizes = c->sizes();
    rep.aut_first = automorphisms(c).size();
    rep.core_is_rigid = certify_universal_for_own_theory(c);

    FormulaPool cons_pool(c->sig_ptr(), pool2, c);
    HuTheory tc = extract_pool_consequences(c, cons_pool);
    rep.axioms_extracted = tc.axioms.size();
    rep.core_models_extraction = is_model(c, tc);

    // continuation window, only for signatures small enough to enumerate
    if (c->sig().num_relations() <= 12) {
        rep.window_checked = true;
        rep.window_ok = true;
        HomSearchOptions first_opt;
        first_opt.mode = SearchMode::First;
        for (const StructPtr& m : enumerate_models(tc, consequence_window))
            if (find_hom(m, c, empty_pin(*m), first_opt).empty()) rep.window_ok = false;
    }

    // second level: arity covers the generated signature, projections kept
    // whenever pairs exist
    int k2 = 1;
    for (int r = 0; r < c->sig().num_relations(); ++r)
        k2 = std::max(k2, static_cast<int>(c->sig().relation(r).arity.size()));
    rep.second_k = k2;
    TypeSpace ts2 = TypeSpace::build(c, TypeSpace::full_base(*c), k2);
    FormulaPool pool2f(c->sig_ptr(), pool2, c);
    DescriptorBudget b2;
    b2.max_descriptor_arity = 1;
    b2.max_param_arity = 0;
    PatternStructure ps2 = pattern_structure(ts2, pool2f, /*with_pi=*/k2 >= 2, b2);
    rep.second_sizes = ps2.structure->sizes();
    CoreResult cr2 = core_of_structure(ps2.structure, /*cert_bound=*/0);
    rep.second_core_sizes = cr2.core->sizes();
    rep.second_self_core = cr2.core->sizes() == ps2.structure->sizes();

    // the element-to-type map must be a sort-wise bijection with the first core
    rep.iota_bijection = true;
    for (int st = 0; st < c->num_sorts(); ++st) {
        int tsort = ts2.find_type_sort({st});
        if (tsort < 0 || ts2.num_points(tsort) != c->size(st)) rep.iota_bijection = false;
    }

    AutCompareReport ac = aut_compare(c, ts2, ps2);
    rep.aut_second = ac.aut_pattern;
    rep.aut_isomorphic = ac.conjugation_is_isomorphism;

    rep.ok = rep.core_is_rigid && rep.core_models_extraction && rep.iota_bijection &&
             rep.second_self_core && rep.aut_isomorphic &&
             (!rep.window_checked || rep.window_ok);
    return rep;
}

std::vector<std::string> atomic_profile(const FinStructure& s, const SortedTuple& t) {
    std::vector<std::string> out;
    const Signature& sig = s.sig();
    int n = static_cast<int>(t.elems.size());
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        int m = static_cast<int>(rel.arity.size());
        std::vector<int> idx(m, 0);
        while (true) {
            bool sorted_ok = true;
            Tuple args(m);
            for (int p = 0; p < m && sorted_ok; ++p) {
                if (t.sorts[idx[p]] != rel.arity[p]) sorted_ok = false;
                else args[p] = t.elems[idx[p]];
            }
            if (sorted_ok && s.has(r, args)) {
                std::ostringstream os;
                os << rel.name << '(';
                for (int p = 0; p < m; ++p) {
                    if (p) os << ',';
                    os << idx[p];
                }
                os << ')';
                out.push_back(os.str());
            }
            int i = m - 1;
            while (i >= 0 && idx[i] == n - 1) idx[i--] = 0;
            if (i < 0) break;
            ++idx[i];
        }
    }
    // equalities among tuple entries
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (t.sorts[i] == t.sorts[j] && t.elems[i] == t.elems[j])
                out.push_back("eq(" + std::to_string(i) + "," + std::to_string(j) + ")");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace plcore
