#include "plcore/eval.hpp"

#include <mutex>
#include <set>
#include <stdexcept>

namespace plcore {

namespace {

struct DisjunctPlan {
    StructPtr query;
    SortedTuple marked;
};

struct FormulaPlan {
    std::vector<DisjunctPlan> disjuncts;
    std::vector<int> free_sorts;
};

FormulaPlan plan_formula(const PosFormula& phi) {
    FormulaPlan plan;
    plan.free_sorts = phi.free_sorts();
    for (const PPFormula& pp : pp_normal_form(phi)) {
        auto [st, marked] = structure_of_pp(pp);
        plan.disjuncts.push_back({st, marked});
    }
    return plan;
}

bool disjunct_holds(const DisjunctPlan& d, StructPtr m, const Tuple& tuple) {
    PartialMap pin = empty_pin(*d.query);
    for (std::size_t i = 0; i < d.marked.elems.size(); ++i) {
        int st = d.marked.sorts[i];
        int e = d.marked.elems[i];
        if (tuple[i] < 0 || tuple[i] >= m->size(st)) throw std::runtime_error("holds: element out of range");
        if (pin[st][e] != -1 && pin[st][e] != tuple[i]) return false;  // merged frees disagree
        pin[st][e] = tuple[i];
    }
    HomSearchOptions opts;
    opts.mode = SearchMode::First;
    return !find_hom(d.query, m, pin, opts).empty();
}

std::mutex cache_mu;
std::map<std::pair<std::string, std::string>, std::vector<Tuple>> solution_cache;

}  // namespace

bool holds(StructPtr m, const PosFormula& phi, const Assignment& asg) {
    if (!m->sig().same_as(phi.sig())) throw std::runtime_error("holds: signature mismatch");
    Tuple tuple;
    std::size_t matched = 0;
    for (int v : phi.free()) {
        auto it = asg.find(phi.vars()[v].name);
        if (it == asg.end())
            throw std::runtime_error("holds: missing assignment for " + phi.vars()[v].name);
        tuple.push_back(it->second);
        ++matched;
    }
    if (matched != asg.size()) {
        for (const auto& [name, _] : asg) {
            bool found = false;
            for (int v : phi.free())
                if (phi.vars()[v].name == name) found = true;
            if (!found) throw std::runtime_error("holds: assignment for unknown variable " + name);
        }
    }
    return holds_at(m, phi, tuple);
}

bool holds_at(StructPtr m, const PosFormula& phi, const Tuple& tuple) {
    if (tuple.size() != phi.free().size())
        throw std::runtime_error("holds_at: tuple arity mismatch");
    auto fs = phi.free_sorts();
    for (std::size_t i = 0; i < tuple.size(); ++i)
        if (tuple[i] < 0 || tuple[i] >= m->size(fs[i]))
            throw std::runtime_error("holds_at: element out of range for its sort");
    FormulaPlan plan = plan_formula(phi);
    for (const auto& d : plan.disjuncts)
        if (disjunct_holds(d, m, tuple)) return true;
    return false;
}

const std::vector<Tuple>& solutions(StructPtr m, const PosFormula& phi) {
    if (!m->sig().same_as(phi.sig())) throw std::runtime_error("solutions: signature mismatch");
    // the printed form alone is ambiguous: free variables may not occur in it
    std::string fkey = phi.print() + "|";
    for (int v : phi.free()) fkey += phi.vars()[v].name + ":" + std::to_string(phi.vars()[v].sort) + ",";
    auto key = std::make_pair(m->encoding(), std::move(fkey));
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        auto it = solution_cache.find(key);
        if (it != solution_cache.end()) return it->second;
    }

    FormulaPlan plan = plan_formula(phi);
    std::set<Tuple> sols;
    for (const auto& d : plan.disjuncts) {
        // every homomorphism of the canonical query projects to a solution
        visit_homs(d.query, m, empty_pin(*d.query), false, [&](const Hom& h) {
            Tuple t(d.marked.elems.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                t[i] = h.map[d.marked.sorts[i]][d.marked.elems[i]];
            sols.insert(std::move(t));
            return true;
        });
    }
    std::vector<Tuple> out(sols.begin(), sols.end());
    std::lock_guard<std::mutex> lock(cache_mu);
    auto [it, inserted] = solution_cache.emplace(std::move(key), std::move(out));
    return it->second;
}

void clear_eval_cache() {
    std::lock_guard<std::mutex> lock(cache_mu);
    solution_cache.clear();
}

}  // namespace plcore
