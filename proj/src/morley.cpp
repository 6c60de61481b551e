#include "plcore/morley.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plcore {

std::vector<int> FoFormula::free_sorts() const {
    std::vector<int> out;
    for (int v : free_) out.push_back(vars_[v].sort);
    return out;
}

namespace {

int fo_copy(const FoFormula& src, int node, std::vector<FoFormula::Node>& nodes,
            const std::vector<int>& varmap) {
    const auto& n = src.nodes()[node];
    FoFormula::Node out;
    out.kind = n.kind;
    out.rel = n.rel;
    for (int a : n.args) out.args.push_back(varmap[a]);
    for (int b : n.bound) out.bound.push_back(varmap[b]);
    for (int k : n.kids) out.kids.push_back(fo_copy(src, k, nodes, varmap));
    if (n.body >= 0) out.body = fo_copy(src, n.body, nodes, varmap);
    nodes.push_back(std::move(out));
    return static_cast<int>(nodes.size()) - 1;
}

}  // namespace

FoFormula fo_combine(const std::vector<FoFormula>& kids, FoFormula::Kind kind) {
    if (kids.empty()) throw std::runtime_error("fo_combine: no children");
    FoFormula f;
    f.sig_ = kids[0].sig_ptr();
    std::map<std::string, int> free_by_name;
    int fresh = 0;
    FoFormula::Node top;
    top.kind = kind;
    for (const auto& k : kids) {
        std::vector<int> varmap(k.vars().size(), -1);
        std::vector<bool> is_free(k.vars().size(), false);
        for (int v : k.free()) is_free[v] = true;
        for (std::size_t v = 0; v < k.vars().size(); ++v) {
            const Var& var = k.vars()[v];
            if (is_free[v]) {
                auto it = free_by_name.find(var.name);
                if (it == free_by_name.end()) {
                    int vid = static_cast<int>(f.vars_.size());
                    f.vars_.push_back(var);
                    f.free_.push_back(vid);
                    free_by_name.emplace(var.name, vid);
                    varmap[v] = vid;
                } else {
                    varmap[v] = it->second;
                }
            } else {
                int vid = static_cast<int>(f.vars_.size());
                Var nv = var;
                nv.name = "_q" + std::to_string(fresh++);
                f.vars_.push_back(nv);
                varmap[v] = vid;
            }
        }
        top.kids.push_back(fo_copy(k, k.root(), f.nodes_, varmap));
    }
    f.nodes_.push_back(std::move(top));
    f.root_ = static_cast<int>(f.nodes_.size()) - 1;
    return f;
}

FoFormula FoFormula::atom(SigPtr sig, int rel, const std::vector<Var>& args) {
    FoFormula f;
    f.sig_ = sig;
    Node n;
    n.kind = Kind::Atom;
    n.rel = rel;
    std::map<std::string, int> seen;
    for (const Var& a : args) {
        auto it = seen.find(a.name);
        int vid;
        if (it == seen.end()) {
            vid = static_cast<int>(f.vars_.size());
            f.vars_.push_back(a);
            f.free_.push_back(vid);
            seen.emplace(a.name, vid);
        } else {
            vid = it->second;
        }
        n.args.push_back(vid);
    }
    f.nodes_.push_back(std::move(n));
    f.root_ = 0;
    return f;
}

FoFormula FoFormula::eq(SigPtr sig, const Var& a, const Var& b) {
    FoFormula f;
    f.sig_ = sig;
    Node n;
    n.kind = Kind::Eq;
    f.vars_.push_back(a);
    f.free_.push_back(0);
    if (a.name == b.name) {
        n.args = {0, 0};
    } else {
        f.vars_.push_back(b);
        f.free_.push_back(1);
        n.args = {0, 1};
    }
    f.nodes_.push_back(std::move(n));
    f.root_ = 0;
    return f;
}

FoFormula FoFormula::conj(const std::vector<FoFormula>& kids) {
    return fo_combine(kids, Kind::And);
}
FoFormula FoFormula::disj(const std::vector<FoFormula>& kids) {
    return fo_combine(kids, Kind::Or);
}

FoFormula FoFormula::neg(const FoFormula& g) {
    FoFormula f = g;
    Node n;
    n.kind = Kind::Not;
    n.kids.push_back(f.root_);
    f.nodes_.push_back(std::move(n));
    f.root_ = static_cast<int>(f.nodes_.size()) - 1;
    return f;
}

FoFormula FoFormula::exists(const std::vector<std::string>& names, const FoFormula& body) {
    FoFormula f = body;
    Node n;
    n.kind = Kind::Exists;
    n.body = f.root_;
    std::vector<int> still_free;
    for (int v : f.free_) {
        if (std::find(names.begin(), names.end(), f.vars_[v].name) != names.end())
            n.bound.push_back(v);
        else
            still_free.push_back(v);
    }
    if (n.bound.size() != names.size()) throw std::runtime_error("exists: name not free in body");
    f.free_ = std::move(still_free);
    f.nodes_.push_back(std::move(n));
    f.root_ = static_cast<int>(f.nodes_.size()) - 1;
    return f;
}

FoFormula FoFormula::forall(const std::vector<std::string>& names, const FoFormula& body) {
    FoFormula f = body;
    Node n;
    n.kind = Kind::Forall;
    n.body = f.root_;
    std::vector<int> still_free;
    for (int v : f.free_) {
        if (std::find(names.begin(), names.end(), f.vars_[v].name) != names.end())
            n.bound.push_back(v);
        else
            still_free.push_back(v);
    }
    if (n.bound.size() != names.size()) throw std::runtime_error("forall: name not free in body");
    f.free_ = std::move(still_free);
    f.nodes_.push_back(std::move(n));
    f.root_ = static_cast<int>(f.nodes_.size()) - 1;
    return f;
}

FoFormula FoFormula::from_positive(const PosFormula& p) {
    FoFormula f;
    f.sig_ = p.sig_ptr();
    f.vars_ = p.vars();
    f.free_ = p.free();
    auto rec = [&](auto&& self, int node) -> int {
        const auto& n = p.nodes()[node];
        Node out;
        switch (n.kind) {
            case PosFormula::Kind::Atom: out.kind = Kind::Atom; break;
            case PosFormula::Kind::Eq: out.kind = Kind::Eq; break;
            case PosFormula::Kind::And: out.kind = Kind::And; break;
            case PosFormula::Kind::Or: out.kind = Kind::Or; break;
            case PosFormula::Kind::Exists: out.kind = Kind::Exists; break;
        }
        out.rel = n.rel;
        out.args = n.args;
        out.bound = n.bound;
        for (int k : n.kids) out.kids.push_back(self(self, k));
        if (n.body >= 0) out.body = self(self, n.body);
        f.nodes_.push_back(std::move(out));
        return static_cast<int>(f.nodes_.size()) - 1;
    };
    f.root_ = rec(rec, p.root());
    return f;
}

std::string FoFormula::print_node(int id) const {
    const Node& n = nodes_[id];
    std::ostringstream os;
    switch (n.kind) {
        case Kind::Atom: {
            os << sig_->relation(n.rel).name << '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) os << ',';
                os << vars_[n.args[i]].name;
            }
            os << ')';
            break;
        }
        case Kind::Eq:
            os << vars_[n.args[0]].name << " = " << vars_[n.args[1]].name;
            break;
        case Kind::And:
        case Kind::Or: {
            os << '(';
            std::string sep = n.kind == Kind::And ? " & " : " | ";
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) os << sep;
                os << print_node(n.kids[i]);
            }
            os << ')';
            break;
        }
        case Kind::Not:
            os << "~" << print_node(n.kids[0]);
            break;
        case Kind::Exists:
        case Kind::Forall: {
            os << '(' << (n.kind == Kind::Exists ? "exists" : "forall");
            for (int b : n.bound) os << ' ' << vars_[b].name;
            os << ". " << print_node(n.body) << ')';
            break;
        }
    }
    return os.str();
}

std::string FoFormula::print() const { return print_node(root_); }

namespace {

bool fo_eval(const FoFormula& f, const FinStructure& m, int node, std::vector<int>& env) {
    const auto& n = f.nodes()[node];
    switch (n.kind) {
        case FoFormula::Kind::Atom: {
            Tuple t(n.args.size());
            for (std::size_t i = 0; i < n.args.size(); ++i) t[i] = env[n.args[i]];
            return m.has(n.rel, t);
        }
        case FoFormula::Kind::Eq:
            return env[n.args[0]] == env[n.args[1]];
        case FoFormula::Kind::And:
            for (int k : n.kids)
                if (!fo_eval(f, m, k, env)) return false;
            return true;
        case FoFormula::Kind::Or:
            for (int k : n.kids)
                if (fo_eval(f, m, k, env)) return true;
            return false;
        case FoFormula::Kind::Not:
            return !fo_eval(f, m, n.kids[0], env);
        case FoFormula::Kind::Exists:
        case FoFormula::Kind::Forall: {
            bool is_exists = n.kind == FoFormula::Kind::Exists;
            // iterate assignments of the bound variables
            std::vector<int> idx(n.bound.size(), 0);
            for (int b : n.bound)
                if (m.size(f.vars()[b].sort) == 0) return !is_exists;
            while (true) {
                for (std::size_t i = 0; i < n.bound.size(); ++i) env[n.bound[i]] = idx[i];
                bool v = fo_eval(f, m, n.body, env);
                if (is_exists && v) return true;
                if (!is_exists && !v) return false;
                int i = static_cast<int>(idx.size()) - 1;
                while (i >= 0 && idx[i] == m.size(f.vars()[n.bound[i]].sort) - 1) idx[i--] = 0;
                if (i < 0) break;
                ++idx[i];
            }
            return !is_exists;
        }
    }
    return false;
}

}  // namespace

bool fo_holds_at(StructPtr m, const FoFormula& f, const Tuple& tuple) {
    if (tuple.size() != f.free().size()) throw std::runtime_error("fo_holds_at: arity mismatch");
    std::vector<int> env(f.vars().size(), -1);
    for (std::size_t i = 0; i < tuple.size(); ++i) env[f.free()[i]] = tuple[i];
    return fo_eval(f, *m, f.root(), env);
}

std::vector<Tuple> fo_solutions(StructPtr m, const FoFormula& f) {
    std::vector<Tuple> out;
    auto fs = f.free_sorts();
    Tuple t(fs.size(), 0);
    for (int s : fs)
        if (m->size(s) == 0) return out;
    if (fs.empty()) {
        if (fo_holds_at(m, f, {})) out.push_back({});
        return out;
    }
    while (true) {
        if (fo_holds_at(m, f, t)) out.push_back(t);
        int i = static_cast<int>(t.size()) - 1;
        while (i >= 0 && t[i] == m->size(fs[i]) - 1) t[i--] = 0;
        if (i < 0) break;
        ++t[i];
    }
    return out;
}

std::vector<FoFormula> fo_pool(StructPtr m, int rank, int arity) {
    if (m->num_sorts() != 1)
        throw std::runtime_error("fo_pool: implemented for single-sorted structures");
    SigPtr sig = m->sig_ptr();
    std::vector<Var> xs;
    for (int i = 0; i < arity; ++i) xs.push_back({"x" + std::to_string(i), 0});

    std::vector<FoFormula> pool;
    std::set<std::vector<Tuple>> seen;  // solution tables over x0..x{arity-1}

    // evaluates over the full assignment shape so cylinders compare equal
    auto table_of = [&](const FoFormula& f) {
        std::vector<Tuple> t;
        Tuple asg(arity, 0);
        std::map<std::string, int> name_pos;
        for (int i = 0; i < arity; ++i) name_pos["x" + std::to_string(i)] = i;
        while (true) {
            Tuple sub;
            for (int v : f.free()) sub.push_back(asg[name_pos.at(f.vars()[v].name)]);
            if (fo_holds_at(m, f, sub)) t.push_back(asg);
            int i = arity - 1;
            while (i >= 0 && asg[i] == m->size(0) - 1) asg[i--] = 0;
            if (i < 0) break;
            ++asg[i];
        }
        return t;
    };
    auto offer = [&](const FoFormula& f) {
        if (seen.insert(table_of(f)).second) {
            pool.push_back(f);
            return true;
        }
        return false;
    };

    // rank 0: literals
    for (int r = 0; r < sig->num_relations(); ++r) {
        const Relation& rel = sig->relation(r);
        std::vector<int> idx(rel.arity.size(), 0);
        while (true) {
            std::vector<Var> args;
            for (int i : idx) args.push_back(xs[i]);
            FoFormula a = FoFormula::atom(sig, r, args);
            offer(a);
            offer(FoFormula::neg(a));
            int i = static_cast<int>(idx.size()) - 1;
            while (i >= 0 && idx[i] == arity - 1) idx[i--] = 0;
            if (i < 0) break;
            ++idx[i];
        }
    }
    for (int i = 0; i < arity; ++i)
        for (int j = i; j < arity; ++j) {
            FoFormula e = FoFormula::eq(sig, xs[i], xs[j]);
            offer(e);
            offer(FoFormula::neg(e));
        }

    auto boolean_close = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            std::size_t n = pool.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (offer(FoFormula::conj({pool[i], pool[j]}))) changed = true;
                    if (offer(FoFormula::disj({pool[i], pool[j]}))) changed = true;
                }
        }
    };
    boolean_close();

    for (int q = 0; q < rank; ++q) {
        std::size_t n = pool.size();
        for (std::size_t i = 0; i < n; ++i)
            for (int v = 0; v < arity; ++v) {
                bool has_v = false;
                for (int fv : pool[i].free())
                    if (pool[i].vars()[fv].name == xs[v].name) has_v = true;
                if (!has_v) continue;
                offer(FoFormula::exists({xs[v].name}, pool[i]));
                offer(FoFormula::forall({xs[v].name}, pool[i]));
            }
        boolean_close();
    }
    return pool;
}

MorleyResult morleyize(StructPtr m, const std::vector<FoFormula>& pool) {
    MorleyResult res;
    std::vector<Relation> rels;
    std::vector<std::vector<Tuple>> tables;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        Relation r;
        r.name = "R" + std::to_string(i);
        r.arity = pool[i].free_sorts();
        if (r.arity.empty()) continue;  // sentences carry no table
        rels.push_back(r);
        tables.push_back(fo_solutions(m, pool[i]));
        res.manifest.push_back({r.name, pool[i].print()});
    }
    auto sig = std::make_shared<Signature>(m->sig().sorts(), rels);
    res.structure = make_structure(sig, m->sizes(), std::move(tables));
    return res;
}

bool elementary_check(const std::vector<std::vector<int>>& h, StructPtr m, StructPtr n,
                      const std::vector<FoFormula>& pool) {
    for (const FoFormula& f : pool) {
        auto fs = f.free_sorts();
        if (fs.empty()) {
            if (fo_holds_at(m, f, {}) != fo_holds_at(n, f, {})) return false;
            continue;
        }
        Tuple t(fs.size(), 0);
        bool empty = false;
        for (int s : fs)
            if (m->size(s) == 0) empty = true;
        if (empty) continue;
        while (true) {
            Tuple ht(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) ht[i] = h[fs[i]][t[i]];
            if (fo_holds_at(m, f, t) != fo_holds_at(n, f, ht)) return false;
            int i = static_cast<int>(t.size()) - 1;
            while (i >= 0 && t[i] == m->size(fs[i]) - 1) t[i--] = 0;
            if (i < 0) break;
            ++t[i];
        }
    }
    return true;
}

std::vector<std::vector<std::vector<int>>> pool_elementary_maps(
    StructPtr m, StructPtr n, const std::vector<FoFormula>& pool) {
    std::vector<std::vector<std::vector<int>>> out;
    // iterate all maps, sort by sort
    std::vector<std::pair<int, int>> flat;
    for (int st = 0; st < m->num_sorts(); ++st)
        for (int e = 0; e < m->size(st); ++e) flat.push_back({st, e});
    std::vector<std::vector<int>> h(m->num_sorts());
    for (int st = 0; st < m->num_sorts(); ++st) h[st].assign(m->size(st), 0);
    if (flat.empty()) {
        if (elementary_check(h, m, n, pool)) out.push_back(h);
        return out;
    }
    while (true) {
        if (elementary_check(h, m, n, pool)) out.push_back(h);
        int i = static_cast<int>(flat.size()) - 1;
        while (i >= 0 && h[flat[i].first][flat[i].second] == n->size(flat[i].first) - 1) {
            h[flat[i].first][flat[i].second] = 0;
            --i;
        }
        if (i < 0) break;
        ++h[flat[i].first][flat[i].second];
    }
    return out;
}

StructPtr tp_expand(StructPtr m, const std::vector<std::vector<PosFormula>>& sigma_pool) {
    std::vector<Relation> rels = m->sig().relations();
    std::vector<std::vector<Tuple>> tables = m->tables();
    for (std::size_t i = 0; i < sigma_pool.size(); ++i) {
        const auto& sigma = sigma_pool[i];
        if (sigma.empty()) throw std::runtime_error("tp_expand: empty formula set");
        std::vector<int> fs = sigma[0].free_sorts();
        for (const PosFormula& phi : sigma)
            if (phi.free_sorts() != fs)
                throw std::runtime_error("tp_expand: mixed free-variable sorts in a set");
        std::vector<Tuple> inter = solutions(m, sigma[0]);
        for (std::size_t j = 1; j < sigma.size(); ++j) {
            const auto& s = solutions(m, sigma[j]);
            std::vector<Tuple> next;
            std::set_intersection(inter.begin(), inter.end(), s.begin(), s.end(),
                                  std::back_inserter(next));
            inter = std::move(next);
        }
        rels.push_back({"P" + std::to_string(i), fs});
        tables.push_back(std::move(inter));
    }
    auto sig = std::make_shared<Signature>(m->sig().sorts(), rels);
    return make_structure(sig, m->sizes(), std::move(tables));
}

}  // namespace plcore
