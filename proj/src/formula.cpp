#include "plcore/formula.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace plcore {

std::vector<int> PosFormula::free_sorts() const {
    std::vector<int> out;
    out.reserve(free_.size());
    for (int v : free_) out.push_back(vars_[v].sort);
    return out;
}

std::vector<int> PPFormula::free_sorts() const {
    std::vector<int> out;
    out.reserve(free.size());
    for (int v : free) out.push_back(vars[v].sort);
    return out;
}

namespace {

// Copies the node subtree of `src` into `dst`, mapping variable ids.
int copy_tree(const PosFormula& src, int node, PosFormula::Node* unused,
              std::vector<PosFormula::Node>& nodes, const std::vector<int>& varmap) {
    const auto& n = src.nodes()[node];
    PosFormula::Node out;
    out.kind = n.kind;
    out.rel = n.rel;
    for (int a : n.args) out.args.push_back(varmap[a]);
    for (int b : n.bound) out.bound.push_back(varmap[b]);
    for (int k : n.kids) out.kids.push_back(copy_tree(src, k, unused, nodes, varmap));
    if (n.body >= 0) out.body = copy_tree(src, n.body, unused, nodes, varmap);
    nodes.push_back(std::move(out));
    return static_cast<int>(nodes.size()) - 1;
}

}  // namespace

PosFormula PosFormula::atom(SigPtr sig, int rel, const std::vector<Var>& args) {
    const Relation& r = sig->relation(rel);
    if (args.size() != r.arity.size()) throw std::runtime_error("atom: arity mismatch for " + r.name);
    PosFormula f;
    f.sig_ = std::move(sig);
    Node n;
    n.kind = Kind::Atom;
    n.rel = rel;
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].sort != r.arity[i])
            throw std::runtime_error("atom: sort mismatch at position " + std::to_string(i) +
                                     " of " + r.name);
        auto it = seen.find(args[i].name);
        int vid;
        if (it == seen.end()) {
            vid = static_cast<int>(f.vars_.size());
            f.vars_.push_back(args[i]);
            f.free_.push_back(vid);
            seen.emplace(args[i].name, vid);
        } else {
            vid = it->second;
            if (f.vars_[vid].sort != args[i].sort)
                throw std::runtime_error("atom: variable " + args[i].name + " used at two sorts");
        }
        n.args.push_back(vid);
    }
    f.root_ = f.add_node(std::move(n));
    return f;
}

PosFormula PosFormula::eq(SigPtr sig, const Var& a, const Var& b) {
    if (a.sort != b.sort) throw std::runtime_error("eq: sort mismatch");
    PosFormula f;
    f.sig_ = std::move(sig);
    Node n;
    n.kind = Kind::Eq;
    f.vars_.push_back(a);
    f.free_.push_back(0);
    if (b.name == a.name) {
        n.args = {0, 0};
    } else {
        f.vars_.push_back(b);
        f.free_.push_back(1);
        n.args = {0, 1};
    }
    f.root_ = f.add_node(std::move(n));
    return f;
}

PosFormula PosFormula::combine(const std::vector<PosFormula>& kids, PosFormula::Kind kind) {
    if (kids.empty()) throw std::runtime_error("combine: no children");
    SigPtr sig = kids[0].sig_ptr();
    for (const auto& k : kids)
        if (!k.sig().same_as(*sig)) throw std::runtime_error("combine: signature mismatch");

    // Rebuild children into a shared arena. Free variables merge by name;
    // bound variables are always fresh.
    struct Builder {
        PosFormula out;
        std::map<std::string, int> free_by_name;
        int fresh = 0;
    } b;
    b.out.sig_ = sig;

    PosFormula::Node top;
    top.kind = kind;
    for (const auto& k : kids) {
        std::vector<int> varmap(k.vars().size(), -1);
        std::vector<bool> is_free(k.vars().size(), false);
        for (int v : k.free()) is_free[v] = true;
        for (std::size_t v = 0; v < k.vars().size(); ++v) {
            const Var& var = k.vars()[v];
            if (is_free[v]) {
                auto it = b.free_by_name.find(var.name);
                if (it == b.free_by_name.end()) {
                    int vid = static_cast<int>(b.out.vars_.size());
                    b.out.vars_.push_back(var);
                    b.out.free_.push_back(vid);
                    b.free_by_name.emplace(var.name, vid);
                    varmap[v] = vid;
                } else {
                    if (b.out.vars_[it->second].sort != var.sort)
                        throw std::runtime_error("combine: variable " + var.name +
                                                 " used at two sorts");
                    varmap[v] = it->second;
                }
            } else {
                int vid = static_cast<int>(b.out.vars_.size());
                Var fresh = var;
                fresh.name = "_b" + std::to_string(b.fresh++);
                b.out.vars_.push_back(fresh);
                varmap[v] = vid;
            }
        }
        top.kids.push_back(copy_tree(k, k.root(), nullptr, b.out.nodes_, varmap));
    }
    b.out.root_ = b.out.add_node(std::move(top));
    return b.out;
}

PosFormula PosFormula::conj(const std::vector<PosFormula>& kids) {
    return combine(kids, Kind::And);
}

PosFormula PosFormula::disj(const std::vector<PosFormula>& kids) {
    return combine(kids, Kind::Or);
}

PosFormula PosFormula::exists(const std::vector<std::string>& names, const PosFormula& body) {
    PosFormula f = body;
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
    if (n.bound.size() != names.size())
        throw std::runtime_error("exists: some quantified names are not free in body");
    f.free_ = std::move(still_free);
    f.root_ = f.add_node(std::move(n));
    return f;
}

PosFormula PosFormula::rename_free(const std::vector<std::string>& names) const {
    if (names.size() != free_.size()) throw std::runtime_error("rename_free: arity mismatch");
    PosFormula f;
    f.sig_ = sig_;
    std::map<std::string, int> by_name;
    std::vector<int> varmap(vars_.size(), -1);
    std::vector<int> free_status(vars_.size(), -1);
    for (std::size_t i = 0; i < free_.size(); ++i) free_status[free_[i]] = static_cast<int>(i);
    int fresh = 0;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
        if (free_status[v] >= 0) {
            const std::string& nm = names[free_status[v]];
            auto it = by_name.find(nm);
            if (it == by_name.end()) {
                int vid = static_cast<int>(f.vars_.size());
                f.vars_.push_back({nm, vars_[v].sort});
                f.free_.push_back(vid);
                by_name.emplace(nm, vid);
                varmap[v] = vid;
            } else {
                if (f.vars_[it->second].sort != vars_[v].sort)
                    throw std::runtime_error("rename_free: merged variables have distinct sorts");
                varmap[v] = it->second;
            }
        } else {
            int vid = static_cast<int>(f.vars_.size());
            Var nv = vars_[v];
            nv.name = "_r" + std::to_string(fresh++);
            f.vars_.push_back(nv);
            varmap[v] = vid;
        }
    }
    f.root_ = copy_tree(*this, root_, nullptr, f.nodes_, varmap);
    return f;
}

std::string PosFormula::print_node(int id, bool parens) const {
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
            std::string sep = n.kind == Kind::And ? " & " : " | ";
            std::ostringstream inner;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) inner << sep;
                Kind ck = nodes_[n.kids[i]].kind;
                bool need = ck == Kind::Exists || (n.kind == Kind::And && ck == Kind::Or);
                inner << print_node(n.kids[i], need);
            }
            if (parens) os << '(' << inner.str() << ')';
            else os << inner.str();
            break;
        }
        case Kind::Exists: {
            std::ostringstream inner;
            inner << "exists";
            for (int b : n.bound) inner << ' ' << vars_[b].name;
            inner << ". " << print_node(n.body, false);
            if (parens) os << '(' << inner.str() << ')';
            else os << inner.str();
            break;
        }
    }
    return os.str();
}

std::string PosFormula::print() const { return print_node(root_, false); }

PosFormula PPFormula::to_formula() const {
    PosFormula f;
    f.sig_ = sig;
    f.vars_ = vars;
    PosFormula::Node matrix;
    matrix.kind = PosFormula::Kind::And;
    std::vector<int> parts;
    for (const auto& a : atoms) {
        PosFormula::Node n;
        n.kind = PosFormula::Kind::Atom;
        n.rel = a.rel;
        n.args = a.args;
        parts.push_back(f.add_node(std::move(n)));
    }
    for (const auto& e : eqs) {
        PosFormula::Node n;
        n.kind = PosFormula::Kind::Eq;
        n.args = {e.first, e.second};
        parts.push_back(f.add_node(std::move(n)));
    }
    int body;
    if (parts.empty()) {
        // An empty conjunction is "x = x" over the first free variable when
        // available; a closed empty pp formula is not representable, so use a
        // trivially true equality over a bound variable instead.
        if (!free.empty()) {
            PosFormula::Node n;
            n.kind = PosFormula::Kind::Eq;
            n.args = {free[0], free[0]};
            body = f.add_node(std::move(n));
        } else if (!bound.empty()) {
            PosFormula::Node n;
            n.kind = PosFormula::Kind::Eq;
            n.args = {bound[0], bound[0]};
            body = f.add_node(std::move(n));
        } else {
            throw std::runtime_error("empty pp formula with no variables");
        }
    } else if (parts.size() == 1) {
        body = parts[0];
    } else {
        matrix.kids = parts;
        body = f.add_node(std::move(matrix));
    }
    if (!bound.empty()) {
        PosFormula::Node ex;
        ex.kind = PosFormula::Kind::Exists;
        ex.bound = bound;
        ex.body = body;
        body = f.add_node(std::move(ex));
    }
    f.free_ = free;
    f.root_ = body;
    return f;
}

std::string HuSentence::print() const {
    PosFormula m = matrix.to_formula();
    std::ostringstream os;
    os << "forall";
    // every variable of the matrix is universally quantified
    for (int b : matrix.bound) os << ' ' << matrix.vars[b].name;
    os << ". ~(";
    // print the matrix without its existential prefix: rebuild as open formula
    PPFormula open = matrix;
    open.free = open.bound;
    open.bound.clear();
    os << open.to_formula().print() << ')';
    return os.str();
}

namespace {

struct NFContext {
    const PosFormula* src;
    std::size_t cap;
};

// Recursion result: list of (bound vars, atoms, eqs) over the source formula's
// variable ids.
struct RawPP {
    std::vector<int> bound;
    std::vector<PPAtom> atoms;
    std::vector<std::pair<int, int>> eqs;
};

std::vector<RawPP> nf(const NFContext& cx, int node) {
    const auto& n = cx.src->nodes()[node];
    switch (n.kind) {
        case PosFormula::Kind::Atom: {
            RawPP p;
            p.atoms.push_back({n.rel, n.args});
            return {p};
        }
        case PosFormula::Kind::Eq: {
            RawPP p;
            p.eqs.push_back({n.args[0], n.args[1]});
            return {p};
        }
        case PosFormula::Kind::Or: {
            std::vector<RawPP> out;
            for (int k : n.kids) {
                auto sub = nf(cx, k);
                out.insert(out.end(), sub.begin(), sub.end());
                if (out.size() > cx.cap)
                    throw std::runtime_error("pp_normal_form: disjunct cap exceeded");
            }
            return out;
        }
        case PosFormula::Kind::And: {
            std::vector<RawPP> acc = {RawPP{}};
            for (int k : n.kids) {
                auto sub = nf(cx, k);
                std::vector<RawPP> next;
                if (acc.size() * sub.size() > cx.cap)
                    throw std::runtime_error("pp_normal_form: disjunct cap exceeded");
                for (const auto& a : acc)
                    for (const auto& s : sub) {
                        RawPP m = a;
                        m.bound.insert(m.bound.end(), s.bound.begin(), s.bound.end());
                        m.atoms.insert(m.atoms.end(), s.atoms.begin(), s.atoms.end());
                        m.eqs.insert(m.eqs.end(), s.eqs.begin(), s.eqs.end());
                        next.push_back(std::move(m));
                    }
                acc = std::move(next);
            }
            return acc;
        }
        case PosFormula::Kind::Exists: {
            auto sub = nf(cx, n.body);
            for (auto& p : sub) p.bound.insert(p.bound.begin(), n.bound.begin(), n.bound.end());
            return sub;
        }
    }
    return {};
}

}  // namespace

std::vector<PPFormula> pp_normal_form(const PosFormula& phi, std::size_t disjunct_cap) {
    NFContext cx{&phi, disjunct_cap};
    auto raw = nf(cx, phi.root());
    std::vector<PPFormula> out;
    out.reserve(raw.size());
    for (const auto& r : raw) {
        PPFormula p;
        p.sig = phi.sig_ptr();
        // Keep every free variable of phi (even ones unused in this disjunct)
        // so all disjuncts share the same solution-tuple shape.
        std::vector<int> varmap(phi.vars().size(), -1);
        for (int v : phi.free()) {
            varmap[v] = static_cast<int>(p.vars.size());
            p.vars.push_back(phi.vars()[v]);
            p.free.push_back(varmap[v]);
        }
        for (int v : r.bound) {
            if (varmap[v] != -1) continue;
            varmap[v] = static_cast<int>(p.vars.size());
            p.vars.push_back(phi.vars()[v]);
            p.bound.push_back(varmap[v]);
        }
        auto mapped = [&](int v) {
            if (varmap[v] == -1) {
                // a bound variable of another branch that leaked in; treat as fresh
                varmap[v] = static_cast<int>(p.vars.size());
                p.vars.push_back(phi.vars()[v]);
                p.bound.push_back(varmap[v]);
            }
            return varmap[v];
        };
        for (const auto& a : r.atoms) {
            PPAtom na;
            na.rel = a.rel;
            for (int v : a.args) na.args.push_back(mapped(v));
            p.atoms.push_back(std::move(na));
        }
        for (const auto& e : r.eqs) p.eqs.push_back({mapped(e.first), mapped(e.second)});
        std::sort(p.atoms.begin(), p.atoms.end());
        p.atoms.erase(std::unique(p.atoms.begin(), p.atoms.end()), p.atoms.end());
        out.push_back(std::move(p));
    }
    return out;
}

PPFormula canonical_query(const FinStructure& a, const SortedTuple& marked) {
    PPFormula p;
    p.sig = a.sig_ptr();
    const Signature& sig = a.sig();
    if (marked.sorts.size() != marked.elems.size())
        throw std::runtime_error("canonical_query: malformed marked tuple");

    // var id per (sort, element); marked elements get their first marked slot
    std::vector<std::vector<int>> vid(sig.num_sorts());
    for (int st = 0; st < sig.num_sorts(); ++st) vid[st].assign(a.size(st), -1);

    for (std::size_t i = 0; i < marked.elems.size(); ++i) {
        int st = marked.sorts[i];
        int e = marked.elems[i];
        if (st < 0 || st >= sig.num_sorts() || e < 0 || e >= a.size(st))
            throw std::runtime_error("canonical_query: marked element not in universe");
        int v = static_cast<int>(p.vars.size());
        p.vars.push_back({"x" + std::to_string(i), st});
        p.free.push_back(v);
        if (vid[st][e] == -1) {
            vid[st][e] = v;
        } else {
            p.eqs.push_back({vid[st][e], v});
        }
    }
    int next_bound = 0;
    for (int st = 0; st < sig.num_sorts(); ++st)
        for (int e = 0; e < a.size(st); ++e)
            if (vid[st][e] == -1) {
                int v = static_cast<int>(p.vars.size());
                p.vars.push_back({"y" + std::to_string(next_bound++), st});
                p.bound.push_back(v);
                vid[st][e] = v;
            }
    for (int r = 0; r < sig.num_relations(); ++r) {
        const Relation& rel = sig.relation(r);
        for (const Tuple& t : a.table(r)) {
            PPAtom at;
            at.rel = r;
            for (std::size_t pos = 0; pos < t.size(); ++pos)
                at.args.push_back(vid[rel.arity[pos]][t[pos]]);
            p.atoms.push_back(std::move(at));
        }
    }
    std::sort(p.atoms.begin(), p.atoms.end());
    return p;
}

std::pair<StructPtr, SortedTuple> structure_of_pp(const PPFormula& phi) {
    const Signature& sig = *phi.sig;
    int nv = static_cast<int>(phi.vars.size());
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : phi.eqs) {
        if (phi.vars[e.first].sort != phi.vars[e.second].sort)
            throw std::runtime_error("structure_of_pp: equality between distinct sorts");
        int a = find(e.first), b = find(e.second);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    // one element per class, ordered: free-variable classes first (in free
    // order), then remaining classes by least var id; ids dense per sort
    std::vector<int> class_elem(nv, -1);
    std::vector<int> sizes(sig.num_sorts(), 0);
    std::vector<int> order;
    for (int v : phi.free)
        if (class_elem[find(v)] == -1) {
            class_elem[find(v)] = 0;  // placeholder
            order.push_back(find(v));
        }
    for (int v = 0; v < nv; ++v)
        if (class_elem[find(v)] == -1) {
            class_elem[find(v)] = 0;
            order.push_back(find(v));
        }
    std::fill(class_elem.begin(), class_elem.end(), -1);
    for (int root : order) class_elem[root] = sizes[phi.vars[root].sort]++;

    std::vector<std::vector<Tuple>> tables(sig.num_relations());
    for (const auto& a : phi.atoms) {
        Tuple t;
        for (int v : a.args) t.push_back(class_elem[find(v)]);
        tables[a.rel].push_back(std::move(t));
    }
    SortedTuple marked;
    for (int v : phi.free) {
        marked.sorts.push_back(phi.vars[v].sort);
        marked.elems.push_back(class_elem[find(v)]);
    }
    return {make_structure(phi.sig, std::move(sizes), std::move(tables)), std::move(marked)};
}

}  // namespace plcore
