#pragma once

#include <memory>
#include <string>
#include <vector>

namespace plcore {

// A tuple of element ids. Element ids are dense 0..n-1 within each sort.
using Tuple = std::vector<int>;

struct Relation {
    std::string name;
    std::vector<int> arity;  // sort indices, one per position
};

// Multi-sorted, purely relational signature. Function symbols are not
// supported; encode function graphs as relations.
class Signature {
public:
    Signature(std::vector<std::string> sorts, std::vector<Relation> relations);

    int num_sorts() const { return static_cast<int>(sorts_.size()); }
    int num_relations() const { return static_cast<int>(relations_.size()); }
    const std::string& sort_name(int s) const { return sorts_[s]; }
    const Relation& relation(int r) const { return relations_[r]; }
    const std::vector<std::string>& sorts() const { return sorts_; }
    const std::vector<Relation>& relations() const { return relations_; }

    // -1 when absent
    int sort_index(const std::string& name) const;
    int relation_index(const std::string& name) const;

    bool same_as(const Signature& other) const;

private:
    std::vector<std::string> sorts_;
    std::vector<Relation> relations_;
};

using SigPtr = std::shared_ptr<const Signature>;

// A tuple tagged with the sorts of its positions.
struct SortedTuple {
    std::vector<int> sorts;
    Tuple elems;

    bool operator==(const SortedTuple& o) const { return sorts == o.sorts && elems == o.elems; }
    bool operator<(const SortedTuple& o) const {
        if (sorts != o.sorts) return sorts < o.sorts;
        return elems < o.elems;
    }
};

// Finite relational structure. Immutable after construction; tables are kept
// sorted and deduplicated so enumeration order is reproducible.
class FinStructure {
public:
    FinStructure(SigPtr sig, std::vector<int> sizes, std::vector<std::vector<Tuple>> tables);

    const Signature& sig() const { return *sig_; }
    const SigPtr& sig_ptr() const { return sig_; }
    int num_sorts() const { return sig_->num_sorts(); }
    int size(int sort) const { return sizes_[sort]; }
    const std::vector<int>& sizes() const { return sizes_; }
    int total_size() const;
    int max_sort_size() const;
    const std::vector<Tuple>& table(int rel) const { return tables_[rel]; }
    const std::vector<std::vector<Tuple>>& tables() const { return tables_; }
    bool has(int rel, const Tuple& t) const;

    // Deterministic byte encoding of the full structure (sizes + tables).
    // Used as a cache key and for exact equality tests.
    const std::string& encoding() const { return encoding_; }

private:
    SigPtr sig_;
    std::vector<int> sizes_;
    std::vector<std::vector<Tuple>> tables_;
    std::string encoding_;
};

using StructPtr = std::shared_ptr<const FinStructure>;

// Diagnostics for the structure invariants; empty result means well-formed.
std::vector<std::string> validate_structure(const FinStructure& s);

StructPtr make_structure(SigPtr sig, std::vector<int> sizes,
                         std::vector<std::vector<Tuple>> tables);

// Substructure induced on the given elements (per sort, ascending ids are
// renumbered densely). Returns the structure and the old->new id maps
// (-1 for dropped elements).
std::pair<StructPtr, std::vector<std::vector<int>>> induced_substructure(
    const FinStructure& s, const std::vector<std::vector<int>>& keep);

// Disjoint union; elements of b are shifted after those of a, per sort.
StructPtr disjoint_union(const FinStructure& a, const FinStructure& b);

// Applies per-sort element permutations (new_id = perm[sort][old_id]).
StructPtr permuted_structure(const FinStructure& s, const std::vector<std::vector<int>>& perm);

}  // namespace plcore
