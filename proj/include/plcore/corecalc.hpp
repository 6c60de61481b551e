#pragma once

#include "plcore/typespace.hpp"

namespace plcore {

struct CoreOfTResult {
    TypeSpace space;
    PatternStructure pattern;
    StructPtr core;
    Hom retraction;  // pattern -> core
    Hom embedding;   // core -> pattern
    bool self_core = false;
    bool u_certified = false;  // End(u) = Aut(u)
    bool u_is_model = true;    // when a theory was supplied
};

// Builds the pattern structure of the type space of u over itself and takes
// its minimum retract. u must be endomorphism-rigid (every endomorphism an
// automorphism), which certifies it as the universal pc model of its own
// h-universal theory; when a theory is supplied, u must also satisfy it.
CoreOfTResult core_of_T(StructPtr u, const HuTheory* t, const FormulaPool& pool, int k,
                        bool with_pi, const DescriptorBudget& budget = {});

struct AutCompareReport {
    std::size_t aut_u = 0;
    std::size_t aut_pattern = 0;
    bool conjugation_is_isomorphism = false;
    std::string detail;
};

// Compares Aut(u) with the automorphisms of the pattern structure via
// conjugation along the class-of map; verifies the map is a group isomorphism.
AutCompareReport aut_compare(StructPtr u, const TypeSpace& ts, const PatternStructure& ps);

struct RepeatedCoreReport {
    std::vector<int> first_sizes;
    std::size_t aut_first = 0;
    std::size_t axioms_extracted = 0;
    bool core_is_rigid = false;       // End = Aut for the first core
    bool core_models_extraction = false;
    bool window_checked = false;      // small-signature continuation window ran
    bool window_ok = false;
    int second_k = 0;
    std::vector<int> second_sizes;
    std::vector<int> second_core_sizes;
    bool iota_bijection = false;      // first-core elements <-> singleton-sort points
    bool second_self_core = false;
    std::size_t aut_second = 0;
    bool aut_isomorphic = false;
    bool ok = false;
};

// Treats the first core as a plain structure, extracts its pu consequences
// within the pool budget, re-runs the pattern construction over it and checks
// that the second core is element-wise bijective with the first with the same
// automorphism group.
RepeatedCoreReport repeated_core_check(const CoreOfTResult& first, const PoolBudget& pool2,
                                       int consequence_window = 2);

// Atomic profile of a tuple: every relation fact formed from its entries.
// Used for the homogeneity and maximality checks on cores.
std::vector<std::string> atomic_profile(const FinStructure& s, const SortedTuple& t);

}  // namespace plcore
