#pragma once

#include <optional>

#include "plcore/pool.hpp"
#include "plcore/theory.hpp"

namespace plcore {

// Positive-type equality of tuples over a base set: base-fixing endomorphisms
// of u exist in both directions.
bool type_equal(StructPtr u, const std::vector<std::vector<char>>& base, const SortedTuple& a,
                const SortedTuple& b);

struct TypeSort {
    std::vector<int> base_sorts;
    std::string name;
};

// Quotient of the tuple powers of a universal model by positive-type equality
// over a base, one quotient per tuple sort of arity <= k.
class TypeSpace {
public:
    struct Options {
        // when set, the base must be the image of an immersion into u
        bool require_immersive_base = true;
    };

    static TypeSpace build(StructPtr u, std::vector<std::vector<char>> base, int k,
                           const Options& opts);
    static TypeSpace build(StructPtr u, std::vector<std::vector<char>> base, int k);

    // convenience: base = whole universe / empty base
    static std::vector<std::vector<char>> full_base(const FinStructure& u);
    static std::vector<std::vector<char>> empty_base(const FinStructure& u);

    const StructPtr& u() const { return u_; }
    const std::vector<std::vector<char>>& base() const { return base_; }
    int k() const { return k_; }

    int num_type_sorts() const { return static_cast<int>(sorts_.size()); }
    const TypeSort& type_sort(int ts) const { return sorts_[ts]; }
    int find_type_sort(const std::vector<int>& base_sorts) const;  // -1 if absent

    int num_points(int ts) const { return static_cast<int>(reps_[ts].size()); }
    const Tuple& rep(int ts, int cls) const { return reps_[ts][cls]; }
    const std::vector<Tuple>& members(int ts, int cls) const { return members_[ts][cls]; }
    int class_of(int ts, const Tuple& elems) const;

    // projection to a subtuple of positions; well-defined on classes
    int project(int ts, int cls, const std::vector<int>& positions, int* target_sort = nullptr) const;

    const std::vector<Hom>& base_fixing_endos() const { return endos_; }

    // membership of phi(x, params) in the type of class cls (params in base)
    bool formula_in_type(const PosFormula& phi, const Tuple& params, int ts, int cls) const;

private:
    StructPtr u_;
    std::vector<std::vector<char>> base_;
    int k_ = 0;
    std::vector<TypeSort> sorts_;
    std::vector<std::vector<Tuple>> reps_;
    std::vector<std::vector<std::vector<Tuple>>> members_;
    std::vector<std::map<Tuple, int>> class_index_;
    std::vector<Hom> endos_;
};

// A definability-pattern relation: holds at (p_0..p_{n-1}) iff for every base
// tuple c solving alpha, some phi_i(x_i, c) lies in p_i. A missing alpha means
// the empty parameter tuple (the relation then reads: some phi_i in p_i).
struct Descriptor {
    std::vector<PosFormula> phis;
    std::optional<PosFormula> alpha;

    int param_arity() const { return alpha ? static_cast<int>(alpha->free().size()) : 0; }
};

// Exact table of the descriptor over the type space; out_sorts receives the
// type-sort index per argument position.
std::vector<Tuple> d_table(const TypeSpace& ts, const Descriptor& d, std::vector<int>* out_sorts);

// Restriction map between type spaces over the same u with nested bases
// (base of `coarse` contained in base of `fine`): sends the class of a tuple
// in the fine space to its class in the coarse space.
std::vector<std::vector<int>> restrict_map(const TypeSpace& fine, const TypeSpace& coarse);

struct DescriptorBudget {
    int max_descriptor_arity = 2;
    int max_param_arity = 1;
    std::size_t max_descriptors = 200000;
};

struct DescriptorInfo {
    std::string name;
    std::vector<int> type_sorts;
    std::vector<std::string> phis;
    std::string alpha;  // empty: parameter-free
};

struct PiInfo {
    std::string name;
    int from_sort;
    std::vector<int> positions;
    int to_sort;
};

struct PatternManifest {
    std::vector<std::string> sort_names;
    std::vector<DescriptorInfo> descriptors;
    std::vector<PiInfo> pis;
    std::string pool_budget;
};

// The type space packaged as a finite structure over a generated signature:
// one sort per tuple sort, one relation per deduplicated descriptor, plus the
// projection graphs when requested.
struct PatternStructure {
    StructPtr structure;
    PatternManifest manifest;
};

PatternStructure pattern_structure(const TypeSpace& ts, const FormulaPool& pool, bool with_pi,
                                   const DescriptorBudget& budget = {});

// Conjugation of an endomorphism of u to a map on the pattern structure.
Hom conjugate_to_pattern(const TypeSpace& ts, const PatternStructure& ps, const Hom& sigma);

}  // namespace plcore
