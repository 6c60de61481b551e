#pragma once

#include <functional>
#include <optional>

#include "plcore/formula.hpp"
#include "plcore/structure.hpp"

namespace plcore {

// Total sort-respecting map between structures over a shared signature.
struct Hom {
    StructPtr source;
    StructPtr target;
    std::vector<std::vector<int>> map;  // [sort][element] -> element

    int apply(int sort, int elem) const { return map[sort][elem]; }
    Tuple apply_tuple(const std::vector<int>& sorts, const Tuple& t) const;
    bool is_injective() const;
    bool is_surjective() const;
};

Hom identity_hom(StructPtr a);
Hom compose(const Hom& second, const Hom& first);  // second ∘ first
bool verify_hom(const Hom& h);                     // tuple-by-tuple check

enum class SearchMode { First, All, Count };

struct HomSearchOptions {
    SearchMode mode = SearchMode::All;
    std::size_t limit = SIZE_MAX;
    bool injective = false;  // restricts to per-sort injective maps
};

// Partial map: pin[sort][element] = target element, or -1 when unpinned.
using PartialMap = std::vector<std::vector<int>>;

PartialMap empty_pin(const FinStructure& a);

// Complete backtracking search for homomorphisms a -> b extending `pin`,
// source elements assigned in ascending flat order, candidate targets tried
// ascending. Results arrive in lexicographic order of the flattened map.
std::vector<Hom> find_hom(StructPtr a, StructPtr b, const PartialMap& pin,
                          const HomSearchOptions& opts = {});

std::size_t count_homs(StructPtr a, StructPtr b, const PartialMap& pin = {});

// Visitor variant; return false from the visitor to stop the search.
void visit_homs(StructPtr a, StructPtr b, const PartialMap& pin, bool injective,
                const std::function<bool(const Hom&)>& visit);

// h : a -> b is an immersion (pp-reflecting) iff it is injective and some
// g : b -> a satisfies g∘h = id. Complete for finite structures.
bool is_immersion(const Hom& h);

// For a homomorphism that is not an immersion, produces a pp formula phi with
// one free variable per source element such that phi holds in the target at
// the image enumeration but fails in the source. The formula is the canonical
// query of a smallest failing induced substructure of the target.
PPFormula immersion_witness(const Hom& h);

struct CoreResult {
    StructPtr core;
    Hom retraction;      // original structure -> core
    Hom embedding;       // core -> original structure (section of the retraction)
    bool certified;      // exhaustive minimality check was run
};

// Minimum retract of a finite structure. Deterministic: the first
// non-injective endomorphism in search order is iterated to an idempotent and
// the structure is restricted to its image, until every endomorphism is
// injective. Minimality is certified exhaustively when the structure has at
// most `cert_bound` elements.
CoreResult core_of_structure(StructPtr a, int cert_bound = 7);

// All automorphisms, in deterministic order. For finite structures these are
// exactly the bijective endomorphisms.
std::vector<Hom> automorphisms(StructPtr a);

}  // namespace plcore
