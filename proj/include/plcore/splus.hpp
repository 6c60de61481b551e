#pragma once

#include "plcore/typespace.hpp"

namespace plcore {

// A realized positive type over m: a model of the theory, a homomorphism from
// m into it, and a marked tuple. Stored in pointed form (base signature
// augmented with singleton marks for the image of m and for the tuple), so
// that type containment is plain homomorphism existence between the pointed
// structures.
struct PointedType {
    StructPtr pointed;   // over the augmented signature, pointed core, canonical
    StructPtr model;     // the underlying plain-signature structure
    std::vector<std::vector<int>> hom;  // m -> model, per sort
    SortedTuple tuple;   // marked tuple in model
};

class SPlusSpace {
public:
    struct Sort {
        std::vector<int> base_sorts;
        std::string name;
    };

    StructPtr m;
    int extension_bound = 0;
    int k = 0;
    std::vector<Sort> sorts;
    std::vector<std::vector<PointedType>> classes;            // per sort, class reps
    std::vector<std::vector<std::vector<char>>> dominates;    // [sort][i][j]: type_i ⊆ type_j

    int find_sort(const std::vector<int>& base_sorts) const;
    int num_points(int s) const { return static_cast<int>(classes[s].size()); }

    // membership of phi(x, params) in the class's type (params from m)
    bool formula_in_type(const PosFormula& phi, const Tuple& params, int s, int cls) const;

    // index of the minimum class in the domination order, or -1
    int minimum_class(int s) const;
};

// Enumerates models of t extending the per-sort sizes of m by at most n
// elements, all homomorphisms from m, and all tuples of arity <= k; quotients
// by mutual domination. Deterministic: classes ordered by (size, canonical
// key) of their pointed core representative.
SPlusSpace build_splus(StructPtr m, const HuTheory& t, int n, int k);

// Exact table of a partial-type pattern relation over the space: holds at
// (p_0..p_{n-1}) iff no parameter tuple c solving alpha in m has every
// phi_i(x_i, c) in p_i.
std::vector<Tuple> r_table(const SPlusSpace& sp, const Descriptor& d, std::vector<int>* out_sorts);

struct SPlusPattern {
    StructPtr structure;
    PatternManifest manifest;
};

SPlusPattern splus_pattern(const SPlusSpace& sp, const FormulaPool& pool,
                           const DescriptorBudget& budget = {});

struct SPlusCoreResult {
    SPlusPattern pattern;
    StructPtr core;
    std::vector<int> core_sizes;
};

// Pattern structure over the partial-type relations, then its minimum retract.
SPlusCoreResult splus_core(const SPlusSpace& sp, const FormulaPool& pool,
                           const DescriptorBudget& budget = {});

}  // namespace plcore
