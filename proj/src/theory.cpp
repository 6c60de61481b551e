#include "plcore/theory.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "plcore/canonical.hpp"

namespace plcore {

std::string Verdict::str() const {
    switch (kind) {
        case Kind::Yes: return "Yes";
        case Kind::No: return "No";
        case Kind::Unknown: return "Unknown(bound=" + std::to_string(bound) + ")";
    }
    return "?";
}

HuTheory HuTheory::from_sentences(SigPtr sig, const std::vector<HuSentence>& sentences) {
    HuTheory t;
    t.sig = sig;
    for (const auto& s : sentences) {
        HuAxiom ax;
        ax.sentence = s;
        auto [st, marked] = structure_of_pp(s.matrix);
        (void)marked;
        ax.forbidden = canonicalize(*st);
        ax.text = s.print();
        t.axioms.push_back(std::move(ax));
    }
    return t;
}

int HuTheory::max_forbidden_sort_size() const {
    int m = 0;
    for (const auto& ax : axioms) m = std::max(m, ax.forbidden->max_sort_size());
    return m;
}

bool is_model(StructPtr m, const HuTheory& t) {
    if (!m->sig().same_as(*t.sig)) throw std::runtime_error("is_model: signature mismatch");
    HomSearchOptions opts;
    opts.mode = SearchMode::First;
    for (const auto& ax : t.axioms)
        if (!find_hom(ax.forbidden, m, empty_pin(*ax.forbidden), opts).empty()) return false;
    return true;
}

namespace {

// All size vectors with every sort in [1, n], ordered by total then lex.
std::vector<std::vector<int>> size_vectors(int num_sorts, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> v(num_sorts, 1);
    while (true) {
        out.push_back(v);
        int i = num_sorts - 1;
        while (i >= 0 && v[i] == n) v[i--] = 1;
        if (i < 0) break;
        ++v[i];
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        int ta = 0, tb = 0;
        for (int x : a) ta += x;
        for (int x : b) tb += x;
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return out;
}

// Extends s by one element of sort j using every possible pattern of tuples
// touching the new element. Calls out(structure) per extension.
void extend_by_element(const FinStructure& s, int j,
                       const std::function<void(StructPtr)>& out) {
    const Signature& sig = s.sig();
    std::vector<int> sizes = s.sizes();
    int e = sizes[j]++;
    // candidate tuples touching the new element
    std::vector<std::pair<int, Tuple>> cands;
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        bool touches = false;
        for (int st : rel.arity)
            if (st == j) touches = true;
        if (!touches) continue;
        std::vector<int> idx(rel.arity.size(), 0);
        while (true) {
            Tuple t(idx.begin(), idx.end());
            bool uses_new = false;
            bool in_range = true;
            for (std::size_t p = 0; p < t.size(); ++p) {
                if (t[p] >= sizes[rel.arity[p]]) in_range = false;
                if (rel.arity[p] == j && t[p] == e) uses_new = true;
            }
            if (in_range && uses_new) cands.push_back({r, t});
            int i = static_cast<int>(idx.size()) - 1;
            while (i >= 0 && idx[i] + 1 == sizes[rel.arity[i]]) idx[i--] = 0;
            if (i < 0) break;
            ++idx[i];
        }
    }
    if (cands.size() > 24)
        throw std::runtime_error("enumerate_models: extension pattern space too large (" +
                                 std::to_string(cands.size()) + " candidate tuples)");
    std::uint32_t limit = 1u << cands.size();
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        std::vector<std::vector<Tuple>> tables = s.tables();
        for (std::size_t c = 0; c < cands.size(); ++c)
            if (mask & (1u << c)) tables[cands[c].first].push_back(cands[c].second);
        out(make_structure(s.sig_ptr(), sizes, std::move(tables)));
    }
}

// Enumerates levels in order; after each completed level the sink receives its
// structures and may stop the generation.
void enumerate_with_filter(SigPtr sig, int n, const std::function<bool(StructPtr)>& keep,
                           const std::function<bool(StructPtr)>& sink) {
    std::map<std::vector<int>, std::vector<StructPtr>> by_sizes;
    for (const auto& sizes : size_vectors(sig->num_sorts(), n)) {
        std::map<std::string, StructPtr> level;  // canonical key -> canonical rep
        auto offer = [&](StructPtr cand) {
            if (!keep(cand)) return;
            CanonicalForm cf = canonical_form(*cand);
            if (level.count(cf.key)) return;
            level.emplace(cf.key, permuted_structure(*cand, cf.perm));
        };
        bool base = true;
        for (int x : sizes)
            if (x > 1) base = false;
        if (base) {
            // enumerate tables directly over the all-ones universe
            std::vector<std::pair<int, Tuple>> cands;
            for (int r = 0; r < sig->num_relations(); ++r)
                cands.push_back({r, Tuple(sig->relation(r).arity.size(), 0)});
            if (cands.size() > 24)
                throw std::runtime_error("enumerate_models: too many relations");
            for (std::uint32_t mask = 0; mask < (1u << cands.size()); ++mask) {
                std::vector<std::vector<Tuple>> tables(sig->num_relations());
                for (std::size_t c = 0; c < cands.size(); ++c)
                    if (mask & (1u << c)) tables[cands[c].first].push_back(cands[c].second);
                offer(make_structure(sig, sizes, std::move(tables)));
            }
        } else {
            int j = sig->num_sorts() - 1;
            while (sizes[j] == 1) --j;
            std::vector<int> parent_sizes = sizes;
            --parent_sizes[j];
            for (const StructPtr& p : by_sizes[parent_sizes])
                extend_by_element(*p, j, offer);
        }
        auto& stored = by_sizes[sizes];
        for (auto& [key, st] : level) {
            stored.push_back(st);
            if (!sink(st)) return;
        }
    }
}

}  // namespace

std::vector<StructPtr> enumerate_structures(SigPtr sig, int n) {
    std::vector<StructPtr> out;
    enumerate_with_filter(
        sig, n, [](StructPtr) { return true; },
        [&](StructPtr s) {
            out.push_back(s);
            return true;
        });
    return out;
}

std::vector<StructPtr> enumerate_models(const HuTheory& t, int n) {
    std::vector<StructPtr> out;
    enumerate_models_stream(t, n, [&](StructPtr s) {
        out.push_back(s);
        return true;
    });
    return out;
}

void enumerate_models_stream(const HuTheory& t, int n,
                             const std::function<bool(StructPtr)>& yield) {
    // induced substructures of models are models, so filtering at every level
    // loses nothing
    enumerate_with_filter(t.sig, n, [&](StructPtr s) { return is_model(s, t); }, yield);
}

Verdict pc_check(StructPtr m, const HuTheory& t, int n, const std::vector<StructPtr>* models) {
    if (!is_model(m, t)) throw std::runtime_error("pc_check: subject is not a model of the theory");
    std::vector<StructPtr> local;
    if (!models) {
        local = enumerate_models(t, n);
        models = &local;
    }
    for (const StructPtr& target : *models) {
        std::optional<Hom> bad;
        visit_homs(m, target, empty_pin(*m), false, [&](const Hom& h) {
            if (!is_immersion(h)) {
                bad = h;
                return false;
            }
            return true;
        });
        if (bad) {
            NoWitness w;
            w.formula = immersion_witness(*bad);
            w.counter_model = target;
            w.hom = bad;
            for (int st = 0; st < m->num_sorts(); ++st)
                for (int e = 0; e < m->size(st); ++e) {
                    w.tuple.sorts.push_back(st);
                    w.tuple.elems.push_back(bad->map[st][e]);
                }
            w.description = "homomorphism into an enumerated model reflects no retraction; "
                            "the pp witness holds at the image but not at the source";
            return Verdict::no(std::move(w));
        }
    }
    // Yes only under the certification window: the search covered every
    // extension pattern size the axioms can force, and the theory is bounded
    // at this window (every enumerated model continues into m).
    bool window_ok = n >= m->max_sort_size() + t.max_forbidden_sort_size();
    if (window_ok) {
        HomSearchOptions first;
        first.mode = SearchMode::First;
        for (const StructPtr& other : *models)
            if (find_hom(other, m, empty_pin(*other), first).empty()) {
                window_ok = false;
                break;
            }
    }
    return window_ok ? Verdict::yes() : Verdict::unknown(n);
}

bool certify_universal_for_own_theory(StructPtr u) {
    bool ok = true;
    visit_homs(u, u, empty_pin(*u), false, [&](const Hom& h) {
        if (!h.is_injective()) {
            ok = false;
            return false;
        }
        return true;
    });
    return ok;
}

UniversalResult find_universal(const HuTheory& t, int n) {
    UniversalResult res;
    res.verdict = Verdict::unknown(n);
    // Certification caps candidate sizes at n - s, so larger models can never
    // be confirmed within this window and are not worth proposing.
    int cand_bound = n - t.max_forbidden_sort_size();
    if (cand_bound < 1) return res;

    std::vector<StructPtr> candidates;
    for (const StructPtr& cand : enumerate_models(t, cand_bound))
        if (certify_universal_for_own_theory(cand)) candidates.push_back(cand);
    if (candidates.empty()) return res;

    // Stream the full model space once, dropping candidates that fail to
    // absorb some model; stop as soon as none are left.
    HomSearchOptions first;
    first.mode = SearchMode::First;
    std::vector<StructPtr> models;
    enumerate_models_stream(t, n, [&](StructPtr other) {
        models.push_back(other);
        std::vector<StructPtr> still;
        for (const StructPtr& cand : candidates)
            if (!find_hom(other, cand, empty_pin(*other), first).empty()) still.push_back(cand);
        candidates = std::move(still);
        return !candidates.empty();
    });

    for (const StructPtr& cand : candidates)
        if (pc_check(cand, t, n, &models).is_yes()) res.all_candidates.push_back(cand);
    if (!res.all_candidates.empty()) {
        res.verdict = Verdict::yes();
        res.model = res.all_candidates.front();
    }
    return res;
}

Verdict jcp_check(const HuTheory& t, int n) {
    std::vector<StructPtr> models = enumerate_models(t, n);
    std::vector<StructPtr> window = enumerate_models(t, 2 * n);
    HomSearchOptions first;
    first.mode = SearchMode::First;
    for (std::size_t i = 0; i < models.size(); ++i)
        for (std::size_t j = i; j < models.size(); ++j) {
            StructPtr uni = disjoint_union(*models[i], *models[j]);
            if (is_model(uni, t)) continue;  // inclusions witness the joint continuation
            bool found = false;
            for (const StructPtr& target : window) {
                if (find_hom(models[i], target, empty_pin(*models[i]), first).empty()) continue;
                if (find_hom(models[j], target, empty_pin(*models[j]), first).empty()) continue;
                found = true;
                break;
            }
            if (!found) {
                NoWitness w;
                SortedTuple none;
                w.description = "models " + std::to_string(i) + " and " + std::to_string(j) +
                                " of the enumeration admit no joint continuation within the "
                                "window; their canonical pp sentences are jointly refuted";
                w.formula = canonical_query(*uni, SortedTuple{});
                w.counter_model = uni;
                return Verdict::no(std::move(w));
            }
        }
    return Verdict::yes();
}

InequalityDefinition find_inequality_definition(StructPtr u, const FormulaPool& pool) {
    InequalityDefinition res;
    const Signature& sig = u->sig();
    res.disjuncts.resize(sig.num_sorts());
    for (int st = 0; st < sig.num_sorts(); ++st) {
        std::set<std::pair<int, int>> uncovered;
        for (int a = 0; a < u->size(st); ++a)
            for (int b = 0; b < u->size(st); ++b)
                if (a != b) uncovered.insert({a, b});
        for (const PosFormula& phi : pool.with_free_sorts({st, st})) {
            if (uncovered.empty()) break;
            const auto& sols = solutions(u, phi);
            bool diagonal = false;
            for (const Tuple& t : sols)
                if (t[0] == t[1]) diagonal = true;
            if (diagonal) continue;  // not apart from equality
            bool covers_new = false;
            for (const Tuple& t : sols)
                if (uncovered.count({t[0], t[1]})) covers_new = true;
            if (!covers_new) continue;
            for (const Tuple& t : sols) uncovered.erase({t[0], t[1]});
            res.disjuncts[st].push_back(phi);
        }
        if (!uncovered.empty()) {
            auto [a, b] = *uncovered.begin();
            res.failure = "sort " + sig.sort_name(st) + ": pair (" + std::to_string(a) + "," +
                          std::to_string(b) + ") is not covered by any diagonal-free pool formula";
            return res;
        }
    }
    res.success = true;
    return res;
}

HuTheory extract_consequences(StructPtr m, int max_elems) {
    HomSearchOptions first;
    first.mode = SearchMode::First;
    std::vector<StructPtr> all = enumerate_structures(m->sig_ptr(), max_elems);
    std::vector<StructPtr> kept;
    for (const StructPtr& cand : all) {
        if (!find_hom(cand, m, empty_pin(*cand), first).empty()) continue;  // not forbidden
        bool redundant = false;
        for (const StructPtr& prev : kept)
            if (!find_hom(prev, cand, empty_pin(*prev), first).empty()) {
                redundant = true;
                break;
            }
        if (!redundant) kept.push_back(cand);
    }
    std::vector<HuSentence> sentences;
    for (const StructPtr& f : kept) {
        PPFormula q = canonical_query(*f, SortedTuple{});
        HuSentence s;
        s.matrix = std::move(q);
        sentences.push_back(std::move(s));
    }
    return HuTheory::from_sentences(m->sig_ptr(), sentences);
}

HausdorffReport hausdorff_probe(StructPtr u, const FormulaPool& pool) {
    HausdorffReport rep;
    const Signature& sig = u->sig();
    // unary positive-type classes: mutual reachability by endomorphisms
    std::vector<Hom> endos = find_hom(u, u, empty_pin(*u), {});
    auto reaches = [&](int st, int a, int b) {
        for (const Hom& h : endos)
            if (h.map[st][a] == b) return true;
        return false;
    };
    for (int st = 0; st < sig.num_sorts(); ++st) {
        std::vector<int> cls(u->size(st), -1);
        std::vector<int> reps;
        for (int e = 0; e < u->size(st); ++e) {
            for (int r : reps)
                if (reaches(st, r, e) && reaches(st, e, r)) {
                    cls[e] = r;
                    break;
                }
            if (cls[e] == -1) {
                cls[e] = e;
                reps.push_back(e);
            }
        }
        const auto& unary = pool.with_free_sorts({st});
        for (std::size_t i = 0; i < reps.size(); ++i)
            for (std::size_t j = i + 1; j < reps.size(); ++j) {
                HausdorffPairReport pr;
                pr.sort = st;
                pr.rep_a = {reps[i]};
                pr.rep_b = {reps[j]};
                for (const PosFormula& phi : unary) {
                    if (pr.found) break;
                    if (holds_at(u, phi, {reps[i]})) continue;  // need phi not in tp(a)
                    for (const PosFormula& psi : unary) {
                        if (holds_at(u, psi, {reps[j]})) continue;
                        bool total = true;
                        for (int e = 0; e < u->size(st) && total; ++e)
                            if (!holds_at(u, phi, {e}) && !holds_at(u, psi, {e})) total = false;
                        if (total) {
                            pr.found = true;
                            pr.phi = phi.print();
                            pr.psi = psi.print();
                            break;
                        }
                    }
                }
                rep.pairs.push_back(std::move(pr));
            }
    }
    rep.all_found = true;
    for (const auto& p : rep.pairs)
        if (!p.found) rep.all_found = false;
    return rep;
}

}  // namespace plcore
