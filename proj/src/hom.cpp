#include "plcore/hom.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <stdexcept>

namespace plcore {

Tuple Hom::apply_tuple(const std::vector<int>& sorts, const Tuple& t) const {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = map[sorts[i]][t[i]];
    return out;
}

bool Hom::is_injective() const {
    for (std::size_t st = 0; st < map.size(); ++st) {
        std::vector<int> seen(target->size(static_cast<int>(st)), 0);
        for (int v : map[st]) {
            if (seen[v]++) return false;
        }
    }
    return true;
}

bool Hom::is_surjective() const {
    for (std::size_t st = 0; st < map.size(); ++st) {
        std::vector<int> seen(target->size(static_cast<int>(st)), 0);
        for (int v : map[st]) seen[v] = 1;
        for (int s : seen)
            if (!s) return false;
    }
    return true;
}

Hom identity_hom(StructPtr a) {
    Hom h;
    h.source = a;
    h.target = a;
    h.map.resize(a->num_sorts());
    for (int st = 0; st < a->num_sorts(); ++st) {
        h.map[st].resize(a->size(st));
        std::iota(h.map[st].begin(), h.map[st].end(), 0);
    }
    return h;
}

Hom compose(const Hom& second, const Hom& first) {
    Hom h;
    h.source = first.source;
    h.target = second.target;
    h.map.resize(first.map.size());
    for (std::size_t st = 0; st < first.map.size(); ++st) {
        h.map[st].resize(first.map[st].size());
        for (std::size_t e = 0; e < first.map[st].size(); ++e)
            h.map[st][e] = second.map[st][first.map[st][e]];
    }
    return h;
}

bool verify_hom(const Hom& h) {
    const Signature& sig = h.source->sig();
    if (!sig.same_as(h.target->sig())) return false;
    for (int st = 0; st < sig.num_sorts(); ++st) {
        if (static_cast<int>(h.map[st].size()) != h.source->size(st)) return false;
        for (int v : h.map[st])
            if (v < 0 || v >= h.target->size(st)) return false;
    }
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        for (const Tuple& t : h.source->table(r))
            if (!h.target->has(r, h.apply_tuple(rel.arity, t))) return false;
    }
    return true;
}

PartialMap empty_pin(const FinStructure& a) {
    PartialMap pin(a.num_sorts());
    for (int st = 0; st < a.num_sorts(); ++st) pin[st].assign(a.size(st), -1);
    return pin;
}

namespace {

// Flat indexing of source elements across sorts, plus per-relation adjacency
// used for propagation during search.
struct SearchPlan {
    const FinStructure* a;
    const FinStructure* b;
    int nflat = 0;
    std::vector<std::pair<int, int>> flat_to_se;       // flat -> (sort, elem)
    std::vector<std::vector<int>> se_to_flat;          // [sort][elem] -> flat
    // source tuples as (rel, tuple); tuples_of[flat] lists tuple indices touching it
    std::vector<std::pair<int, Tuple>> src_tuples;
    std::vector<std::vector<int>> tuples_of;
};

SearchPlan make_plan(const FinStructure& a, const FinStructure& b) {
    SearchPlan p;
    p.a = &a;
    p.b = &b;
    p.se_to_flat.resize(a.num_sorts());
    for (int st = 0; st < a.num_sorts(); ++st) {
        p.se_to_flat[st].resize(a.size(st));
        for (int e = 0; e < a.size(st); ++e) {
            p.se_to_flat[st][e] = p.nflat++;
            p.flat_to_se.push_back({st, e});
        }
    }
    const Signature& sig = a.sig();
    for (int r = 0; r < sig.num_relations(); ++r)
        for (const Tuple& t : a.table(r)) p.src_tuples.push_back({r, t});
    p.tuples_of.resize(p.nflat);
    for (std::size_t ti = 0; ti < p.src_tuples.size(); ++ti) {
        const auto& [r, t] = p.src_tuples[ti];
        const Relation& rel = sig.relation(r);
        std::vector<int> seen;
        for (std::size_t pos = 0; pos < t.size(); ++pos) {
            int f = p.se_to_flat[rel.arity[pos]][t[pos]];
            if (std::find(seen.begin(), seen.end(), f) == seen.end()) {
                p.tuples_of[f].push_back(static_cast<int>(ti));
                seen.push_back(f);
            }
        }
    }
    return p;
}

struct Searcher {
    const SearchPlan& plan;
    bool injective;
    const std::function<bool(const Hom&)>& visit;
    std::vector<int> assign;                 // flat -> target elem or -1
    std::vector<std::vector<char>> used;     // [sort][target elem], injective mode
    bool stopped = false;

    Searcher(const SearchPlan& p, bool inj, const std::function<bool(const Hom&)>& v)
        : plan(p), injective(inj), visit(v) {
        assign.assign(plan.nflat, -1);
        used.resize(plan.b->num_sorts());
        for (int st = 0; st < plan.b->num_sorts(); ++st)
            used[st].assign(plan.b->size(st), 0);
    }

    // Checks all source tuples touching `flat` whose elements are all assigned.
    bool consistent(int flat) const {
        const Signature& sig = plan.a->sig();
        for (int ti : plan.tuples_of[flat]) {
            const auto& [r, t] = plan.src_tuples[ti];
            const Relation& rel = sig.relation(r);
            Tuple image(t.size());
            bool complete = true;
            for (std::size_t pos = 0; pos < t.size(); ++pos) {
                int f = plan.se_to_flat[rel.arity[pos]][t[pos]];
                if (assign[f] < 0) {
                    complete = false;
                    break;
                }
                image[pos] = assign[f];
            }
            if (complete && !plan.b->has(r, image)) return false;
        }
        return true;
    }

    void emit() {
        Hom h;
        h.map.resize(plan.a->num_sorts());
        for (int st = 0; st < plan.a->num_sorts(); ++st) {
            h.map[st].resize(plan.a->size(st));
            for (int e = 0; e < plan.a->size(st); ++e)
                h.map[st][e] = assign[plan.se_to_flat[st][e]];
        }
        if (!visit(h)) stopped = true;
    }

    void rec(int flat) {
        if (stopped) return;
        if (flat == plan.nflat) {
            emit();
            return;
        }
        if (assign[flat] >= 0) {  // pinned
            rec(flat + 1);
            return;
        }
        auto [st, e] = plan.flat_to_se[flat];
        int nb = plan.b->size(st);
        for (int v = 0; v < nb && !stopped; ++v) {
            if (injective && used[st][v]) continue;
            assign[flat] = v;
            if (consistent(flat)) {
                if (injective) used[st][v] = 1;
                rec(flat + 1);
                if (injective) used[st][v] = 0;
            }
            assign[flat] = -1;
        }
    }
};

}  // namespace

void visit_homs(StructPtr a, StructPtr b, const PartialMap& pin, bool injective,
                const std::function<bool(const Hom&)>& visit) {
    if (!a->sig().same_as(b->sig())) throw std::runtime_error("find_hom: signature mismatch");
    SearchPlan plan = make_plan(*a, *b);
    const std::function<bool(const Hom&)> wrapped = [&](const Hom& h) {
        Hom full = h;
        full.source = a;
        full.target = b;
        return visit(full);
    };
    Searcher s(plan, injective, wrapped);
    if (!pin.empty()) {
        for (int st = 0; st < a->num_sorts(); ++st)
            for (int e = 0; e < a->size(st); ++e) {
                int v = pin[st][e];
                if (v < 0) continue;
                if (v >= b->size(st)) return;  // unsatisfiable pin
                int flat = plan.se_to_flat[st][e];
                if (s.injective && s.used[st][v]) return;
                s.assign[flat] = v;
                if (s.injective) s.used[st][v] = 1;
                if (!s.consistent(flat)) return;  // pin already violates a relation
            }
        // re-check every pinned element once all pins are placed
        for (int st = 0; st < a->num_sorts(); ++st)
            for (int e = 0; e < a->size(st); ++e)
                if (pin[st][e] >= 0 && !s.consistent(plan.se_to_flat[st][e])) return;
    }
    s.rec(0);
}

std::vector<Hom> find_hom(StructPtr a, StructPtr b, const PartialMap& pin,
                          const HomSearchOptions& opts) {
    std::vector<Hom> out;
    std::size_t limit = opts.mode == SearchMode::First ? 1 : opts.limit;
    visit_homs(a, b, pin, opts.injective, [&](const Hom& h) {
        out.push_back(h);
        return out.size() < limit;
    });
    return out;
}

std::size_t count_homs(StructPtr a, StructPtr b, const PartialMap& pin) {
    std::size_t n = 0;
    visit_homs(a, b, pin.empty() ? empty_pin(*a) : pin, false, [&](const Hom&) {
        ++n;
        return true;
    });
    return n;
}

bool is_immersion(const Hom& h) {
    if (!verify_hom(h)) throw std::runtime_error("is_immersion: not a homomorphism");
    if (!h.is_injective()) return false;
    // retraction g : target -> source with g∘h = id
    PartialMap pin = empty_pin(*h.target);
    for (int st = 0; st < h.source->num_sorts(); ++st)
        for (int e = 0; e < h.source->size(st); ++e) pin[st][h.map[st][e]] = e;
    HomSearchOptions opts;
    opts.mode = SearchMode::First;
    return !find_hom(h.target, h.source, pin, opts).empty();
}

namespace {

// Enumerates subsets of `pool` of size k in lexicographic order.
bool next_subset(std::vector<int>& idx, int pool_size) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < pool_size - (k - i)) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

PPFormula immersion_witness(const Hom& h) {
    const FinStructure& b = *h.target;
    // enumeration of the source, flattened sort by sort
    SortedTuple marks;
    for (int st = 0; st < h.source->num_sorts(); ++st)
        for (int e = 0; e < h.source->size(st); ++e) {
            marks.sorts.push_back(st);
            marks.elems.push_back(h.map[st][e]);
        }
    // candidate extra elements of b (outside the image)
    std::vector<std::pair<int, int>> extras;
    for (int st = 0; st < b.num_sorts(); ++st) {
        std::vector<char> in_img(b.size(st), 0);
        for (int e = 0; e < h.source->size(st); ++e) in_img[h.map[st][e]] = 1;
        for (int v = 0; v < b.size(st); ++v)
            if (!in_img[v]) extras.push_back({st, v});
    }

    auto try_subset = [&](const std::vector<int>& chosen) -> std::optional<PPFormula> {
        std::vector<std::vector<int>> keep(b.num_sorts());
        for (std::size_t i = 0; i < marks.elems.size(); ++i)
            keep[marks.sorts[i]].push_back(marks.elems[i]);
        for (int ci : chosen) keep[extras[ci].first].push_back(extras[ci].second);
        auto [b0, remap] = induced_substructure(b, keep);
        // pin the marked elements of b0 back to the source enumeration
        PartialMap pin = empty_pin(*b0);
        int flat = 0;
        bool conflict = false;
        for (int st = 0; st < h.source->num_sorts(); ++st)
            for (int e = 0; e < h.source->size(st); ++e, ++flat) {
                int m = remap[st][h.map[st][e]];
                if (pin[st][m] != -1 && pin[st][m] != e) conflict = true;
                pin[st][m] = e;
            }
        HomSearchOptions opts;
        opts.mode = SearchMode::First;
        bool retract = !conflict && !find_hom(b0, h.source, pin, opts).empty();
        if (retract) return std::nullopt;
        // remap marks into b0 ids
        SortedTuple m0 = marks;
        for (std::size_t i = 0; i < m0.elems.size(); ++i)
            m0.elems[i] = remap[m0.sorts[i]][m0.elems[i]];
        return canonical_query(*b0, m0);
    };

    for (std::size_t k = 0; k <= extras.size(); ++k) {
        std::vector<int> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        if (k == 0) {
            if (auto w = try_subset({})) return *w;
            continue;
        }
        if (extras.size() < k) break;
        do {
            if (auto w = try_subset(idx)) return *w;
        } while (next_subset(idx, static_cast<int>(extras.size())));
    }
    throw std::runtime_error("immersion_witness: homomorphism is an immersion");
}

namespace {

// Iterates an endomorphism until idempotent on its image.
Hom idempotent_power(const Hom& f) {
    Hom g = f;
    auto image_sizes = [](const Hom& h) {
        std::vector<int> out;
        for (std::size_t st = 0; st < h.map.size(); ++st) {
            std::vector<char> seen(h.target->size(static_cast<int>(st)), 0);
            int n = 0;
            for (int v : h.map[st])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++n;
                }
            out.push_back(n);
        }
        return out;
    };
    while (image_sizes(compose(g, g)) != image_sizes(g)) g = compose(g, g);
    // g now permutes its image; raise to the permutation order
    Hom p = g;
    auto fixes_image = [&](const Hom& h) {
        for (std::size_t st = 0; st < h.map.size(); ++st) {
            std::vector<char> in_img(h.target->size(static_cast<int>(st)), 0);
            for (int v : g.map[st]) in_img[v] = 1;
            for (int v = 0; v < static_cast<int>(h.map[st].size()); ++v)
                if (in_img[v] && h.map[st][v] != v) return false;
        }
        return true;
    };
    while (!fixes_image(p)) p = compose(p, g);
    return p;
}

}  // namespace

CoreResult core_of_structure(StructPtr a, int cert_bound) {
    StructPtr cur = a;
    Hom retraction = identity_hom(a);
    Hom embedding = identity_hom(a);  // cur -> a
    while (true) {
        std::optional<Hom> non_inj;
        visit_homs(cur, cur, empty_pin(*cur), false, [&](const Hom& h) {
            if (!h.is_injective()) {
                non_inj = h;
                return false;
            }
            return true;
        });
        if (!non_inj) break;
        Hom idem = idempotent_power(*non_inj);
        std::vector<std::vector<int>> keep(cur->num_sorts());
        for (int st = 0; st < cur->num_sorts(); ++st)
            for (int v : idem.map[st]) keep[st].push_back(v);
        auto [restricted, remap] = induced_substructure(*cur, keep);
        Hom step;
        step.source = cur;
        step.target = restricted;
        step.map.resize(cur->num_sorts());
        Hom incl;
        incl.source = restricted;
        incl.target = cur;
        incl.map.resize(cur->num_sorts());
        for (int st = 0; st < cur->num_sorts(); ++st) {
            step.map[st].resize(cur->size(st));
            incl.map[st].resize(restricted->size(st));
            for (int e = 0; e < cur->size(st); ++e) {
                step.map[st][e] = remap[st][idem.map[st][e]];
                if (remap[st][e] >= 0) incl.map[st][remap[st][e]] = e;
            }
        }
        retraction = compose(step, retraction);
        embedding = compose(embedding, incl);
        cur = restricted;
    }

    CoreResult res;
    res.core = cur;
    res.retraction = retraction;
    res.embedding = embedding;
    res.embedding.source = cur;
    res.certified = false;
    if (a->total_size() <= cert_bound) {
        // exhaustive check: no endomorphism of the original structure has a
        // stabilized image smaller than the computed core
        int best = a->total_size();
        visit_homs(a, a, empty_pin(*a), false, [&](const Hom& h) {
            Hom idem = idempotent_power(h);
            int n = 0;
            for (std::size_t st = 0; st < idem.map.size(); ++st) {
                std::vector<char> seen(a->size(static_cast<int>(st)), 0);
                for (int v : idem.map[st])
                    if (!seen[v]) {
                        seen[v] = 1;
                        ++n;
                    }
            }
            best = std::min(best, n);
            return true;
        });
        if (best != cur->total_size())
            throw std::runtime_error("core_of_structure: minimality certification failed");
        res.certified = true;
    }
    return res;
}

std::vector<Hom> automorphisms(StructPtr a) {
    HomSearchOptions opts;
    opts.injective = true;
    std::vector<Hom> out = find_hom(a, a, empty_pin(*a), opts);
    // injective endomorphisms of a finite structure map each table onto
    // itself, so the inverse is automatically a homomorphism; assert it
    for (const Hom& h : out) {
        Hom inv;
        inv.source = a;
        inv.target = a;
        inv.map.resize(a->num_sorts());
        for (int st = 0; st < a->num_sorts(); ++st) {
            inv.map[st].assign(a->size(st), -1);
            for (int e = 0; e < a->size(st); ++e) inv.map[st][h.map[st][e]] = e;
        }
        if (!verify_hom(inv)) throw std::runtime_error("automorphisms: inverse is not a hom");
    }
    return out;
}

}  // namespace plcore
