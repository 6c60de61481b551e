#include "plcore/structure.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace plcore {

Signature::Signature(std::vector<std::string> sorts, std::vector<Relation> relations)
    : sorts_(std::move(sorts)), relations_(std::move(relations)) {
    for (std::size_t i = 0; i < sorts_.size(); ++i)
        for (std::size_t j = i + 1; j < sorts_.size(); ++j)
            if (sorts_[i] == sorts_[j]) throw std::runtime_error("duplicate sort name: " + sorts_[i]);
    for (std::size_t i = 0; i < relations_.size(); ++i) {
        for (std::size_t j = i + 1; j < relations_.size(); ++j)
            if (relations_[i].name == relations_[j].name)
                throw std::runtime_error("duplicate relation name: " + relations_[i].name);
        for (int s : relations_[i].arity)
            if (s < 0 || s >= num_sorts())
                throw std::runtime_error("relation " + relations_[i].name + " uses unknown sort");
    }
}

int Signature::sort_index(const std::string& name) const {
    for (int i = 0; i < num_sorts(); ++i)
        if (sorts_[i] == name) return i;
    return -1;
}

int Signature::relation_index(const std::string& name) const {
    for (int i = 0; i < num_relations(); ++i)
        if (relations_[i].name == name) return i;
    return -1;
}

bool Signature::same_as(const Signature& other) const {
    if (this == &other) return true;
    if (sorts_ != other.sorts_) return false;
    if (relations_.size() != other.relations_.size()) return false;
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].name != other.relations_[i].name ||
            relations_[i].arity != other.relations_[i].arity)
            return false;
    return true;
}

FinStructure::FinStructure(SigPtr sig, std::vector<int> sizes,
                           std::vector<std::vector<Tuple>> tables)
    : sig_(std::move(sig)), sizes_(std::move(sizes)), tables_(std::move(tables)) {
    if (static_cast<int>(sizes_.size()) != sig_->num_sorts())
        throw std::runtime_error("size vector does not match signature sorts");
    tables_.resize(sig_->num_relations());
    for (auto& tb : tables_) {
        std::sort(tb.begin(), tb.end());
        tb.erase(std::unique(tb.begin(), tb.end()), tb.end());
    }
    std::ostringstream os;
    for (int n : sizes_) os << n << ';';
    for (const auto& tb : tables_) {
        os << '|';
        for (const auto& t : tb) {
            for (int e : t) os << e << ',';
            os << ' ';
        }
    }
    encoding_ = os.str();
}

int FinStructure::total_size() const {
    return std::accumulate(sizes_.begin(), sizes_.end(), 0);
}

int FinStructure::max_sort_size() const {
    int m = 0;
    for (int n : sizes_) m = std::max(m, n);
    return m;
}

bool FinStructure::has(int rel, const Tuple& t) const {
    const auto& tb = tables_[rel];
    return std::binary_search(tb.begin(), tb.end(), t);
}

std::vector<std::string> validate_structure(const FinStructure& s) {
    std::vector<std::string> out;
    const Signature& sig = s.sig();
    for (int st = 0; st < sig.num_sorts(); ++st)
        if (s.size(st) < 0)
            out.push_back("sort " + sig.sort_name(st) + ": negative universe size");
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        const auto& tb = s.table(r);
        for (std::size_t i = 0; i < tb.size(); ++i) {
            if (tb[i].size() != rel.arity.size()) {
                out.push_back("relation " + rel.name + ", tuple " + std::to_string(i) +
                              ": arity mismatch");
                continue;
            }
            for (std::size_t p = 0; p < tb[i].size(); ++p) {
                int sort = rel.arity[p];
                if (tb[i][p] < 0 || tb[i][p] >= s.size(sort))
                    out.push_back("relation " + rel.name + ", tuple " + std::to_string(i) +
                                  ": element " + std::to_string(tb[i][p]) +
                                  " out of range for sort " + sig.sort_name(sort));
            }
        }
    }
    return out;
}

StructPtr make_structure(SigPtr sig, std::vector<int> sizes,
                         std::vector<std::vector<Tuple>> tables) {
    return std::make_shared<FinStructure>(std::move(sig), std::move(sizes), std::move(tables));
}

std::pair<StructPtr, std::vector<std::vector<int>>> induced_substructure(
    const FinStructure& s, const std::vector<std::vector<int>>& keep) {
    const Signature& sig = s.sig();
    std::vector<std::vector<int>> remap(sig.num_sorts());
    std::vector<int> sizes(sig.num_sorts(), 0);
    for (int st = 0; st < sig.num_sorts(); ++st) {
        remap[st].assign(s.size(st), -1);
        std::vector<int> kept = keep[st];
        std::sort(kept.begin(), kept.end());
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        for (int e : kept) remap[st][e] = sizes[st]++;
    }
    std::vector<std::vector<Tuple>> tables(sig.num_relations());
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        for (const Tuple& t : s.table(r)) {
            Tuple nt(t.size());
            bool ok = true;
            for (std::size_t p = 0; p < t.size() && ok; ++p) {
                nt[p] = remap[rel.arity[p]][t[p]];
                if (nt[p] < 0) ok = false;
            }
            if (ok) tables[r].push_back(std::move(nt));
        }
    }
    return {make_structure(s.sig_ptr(), std::move(sizes), std::move(tables)), std::move(remap)};
}

StructPtr disjoint_union(const FinStructure& a, const FinStructure& b) {
    if (!a.sig().same_as(b.sig())) throw std::runtime_error("disjoint_union: signature mismatch");
    const Signature& sig = a.sig();
    std::vector<int> sizes(sig.num_sorts());
    for (int st = 0; st < sig.num_sorts(); ++st) sizes[st] = a.size(st) + b.size(st);
    std::vector<std::vector<Tuple>> tables(sig.num_relations());
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        tables[r] = a.table(r);
        for (const Tuple& t : b.table(r)) {
            Tuple nt(t.size());
            for (std::size_t p = 0; p < t.size(); ++p) nt[p] = t[p] + a.size(rel.arity[p]);
            tables[r].push_back(std::move(nt));
        }
    }
    return make_structure(a.sig_ptr(), std::move(sizes), std::move(tables));
}

StructPtr permuted_structure(const FinStructure& s, const std::vector<std::vector<int>>& perm) {
    const Signature& sig = s.sig();
    std::vector<std::vector<Tuple>> tables(sig.num_relations());
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        for (const Tuple& t : s.table(r)) {
            Tuple nt(t.size());
            for (std::size_t p = 0; p < t.size(); ++p) nt[p] = perm[rel.arity[p]][t[p]];
            tables[r].push_back(std::move(nt));
        }
    }
    return make_structure(s.sig_ptr(), s.sizes(), std::move(tables));
}

}  // namespace plcore
