#include "plcore/canonical.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <numeric>
#include <stdexcept>

namespace plcore {

namespace {

// Groups elements of each sort by their unary membership pattern. Isomorphisms
// preserve these groups, so permutations may be searched per group.
std::vector<std::vector<std::vector<int>>> unary_groups(const FinStructure& s) {
    const Signature& sig = s.sig();
    std::vector<std::vector<std::vector<int>>> groups(sig.num_sorts());
    for (int st = 0; st < sig.num_sorts(); ++st) {
        std::map<std::vector<int>, std::vector<int>> by_profile;
        for (int e = 0; e < s.size(st); ++e) {
            std::vector<int> profile;
            for (int r = 0; r < sig.num_relations(); ++r) {
                const Relation& rel = sig.relation(r);
                if (rel.arity.size() == 1 && rel.arity[0] == st)
                    profile.push_back(s.has(r, {e}) ? 1 : 0);
            }
            by_profile[profile].push_back(e);
        }
        for (auto& [prof, elems] : by_profile) groups[st].push_back(elems);
    }
    return groups;
}

long long factorial_capped(std::size_t n, long long cap) {
    long long f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= static_cast<long long>(i);
        if (f > cap) return cap + 1;
    }
    return f;
}

std::string key_from_ints(const std::vector<int>& v) {
    std::string out(v.size() * sizeof(int), '\0');
    std::memcpy(out.data(), v.data(), out.size());
    return out;
}

}  // namespace

CanonicalForm canonical_form(const FinStructure& s, long long perm_budget) {
    auto groups = unary_groups(s);
    long long count = 1;
    for (const auto& sort_groups : groups)
        for (const auto& g : sort_groups) {
            count *= factorial_capped(g.size(), perm_budget);
            if (count > perm_budget)
                throw std::runtime_error("canonical_form: permutation budget exceeded");
        }

    const Signature& sig = s.sig();
    // target id slots per group, assigned in profile order
    std::vector<std::vector<int>> slot(sig.num_sorts());
    for (int st = 0; st < sig.num_sorts(); ++st) {
        slot[st].assign(s.size(st), -1);
        int next = 0;
        for (const auto& g : groups[st])
            for (int e : g) slot[st][e] = next++;
    }

    struct GroupRef {
        int sort;
        std::vector<int> order;   // current permutation of the group's elements
        std::vector<int> slots;   // target ids, in position order
    };
    std::vector<GroupRef> refs;
    for (int st = 0; st < sig.num_sorts(); ++st)
        for (const auto& g : groups[st]) {
            GroupRef ref;
            ref.sort = st;
            ref.order = g;
            std::sort(ref.order.begin(), ref.order.end());
            ref.slots.reserve(g.size());
            for (int e : g) ref.slots.push_back(slot[st][e]);
            refs.push_back(std::move(ref));
        }

    bool have_best = false;
    std::vector<int> best_key;
    std::vector<std::vector<int>> best_perm;
    std::vector<std::vector<int>> perm(sig.num_sorts());
    for (int st = 0; st < sig.num_sorts(); ++st) perm[st].assign(s.size(st), -1);

    std::vector<int> key;
    std::vector<Tuple> scratch;
    auto apply = [&]() {
        for (const auto& ref : refs)
            for (std::size_t i = 0; i < ref.order.size(); ++i)
                perm[ref.sort][ref.order[i]] = ref.slots[i];
        key.clear();
        for (int n : s.sizes()) key.push_back(n);
        for (int r = 0; r < sig.num_relations(); ++r) {
            const Relation& rel = sig.relation(r);
            scratch.clear();
            for (const Tuple& t : s.table(r)) {
                Tuple nt(t.size());
                for (std::size_t p = 0; p < t.size(); ++p) nt[p] = perm[rel.arity[p]][t[p]];
                scratch.push_back(std::move(nt));
            }
            std::sort(scratch.begin(), scratch.end());
            key.push_back(-1);  // relation separator
            for (const Tuple& t : scratch)
                for (int e : t) key.push_back(e);
        }
        if (!have_best || key < best_key) {
            have_best = true;
            best_key = key;
            best_perm = perm;
        }
    };

    std::size_t k = refs.size();
    while (true) {
        apply();
        std::size_t i = 0;
        while (i < k && !std::next_permutation(refs[i].order.begin(), refs[i].order.end())) ++i;
        if (i == k) break;
    }
    CanonicalForm best;
    best.key = key_from_ints(best_key);
    best.perm = std::move(best_perm);
    return best;
}

StructPtr canonicalize(const FinStructure& s, long long perm_budget) {
    CanonicalForm cf = canonical_form(s, perm_budget);
    return permuted_structure(s, cf.perm);
}

bool iso_equal(const FinStructure& a, const FinStructure& b, long long perm_budget) {
    if (!a.sig().same_as(b.sig())) return false;
    if (a.sizes() != b.sizes()) return false;
    return canonical_form(a, perm_budget).key == canonical_form(b, perm_budget).key;
}

}  // namespace plcore
