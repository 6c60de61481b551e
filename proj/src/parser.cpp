#include "plcore/parser.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <vector>

namespace plcore {

namespace {

enum class Tok { Name, LParen, RParen, Comma, Dot, Amp, Bar, Tilde, Equal, Colon, End };

struct Token {
    Tok kind;
    std::string text;
    int pos;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    int i = 0, n = static_cast<int>(s.size());
    while (i < n) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        int start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (i < n && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\''))
                name += s[i++];
            out.push_back({Tok::Name, name, start});
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::LParen, "(", start}); break;
            case ')': out.push_back({Tok::RParen, ")", start}); break;
            case ',': out.push_back({Tok::Comma, ",", start}); break;
            case '.': out.push_back({Tok::Dot, ".", start}); break;
            case '&': out.push_back({Tok::Amp, "&", start}); break;
            case '|': out.push_back({Tok::Bar, "|", start}); break;
            case '~': out.push_back({Tok::Tilde, "~", start}); break;
            case '=': out.push_back({Tok::Equal, "=", start}); break;
            case ':': out.push_back({Tok::Colon, ":", start}); break;
            default:
                throw ParseError("col " + std::to_string(start) + ": unexpected character '" +
                                 std::string(1, c) + "'");
        }
        ++i;
    }
    out.push_back({Tok::End, "", n});
    return out;
}

// Untyped parse tree; sorts are resolved after parsing.
struct UNode {
    enum class K { Atom, Eq, And, Or, Exists, Forall, Not } k;
    std::string rel;                       // Atom
    std::vector<std::string> vars;         // Atom args / quantifier vars (unique names)
    std::vector<std::unique_ptr<UNode>> kids;
    int pos = 0;
};

struct VarInfo {
    std::string display;  // name used for printing
    std::string annot;    // declared sort name, if any
    int sort = -1;
};

struct ParserState {
    const std::vector<Token>* toks;
    std::size_t at = 0;
    SigPtr sig;
    std::map<std::string, VarInfo> vars;              // unique name -> info
    std::vector<std::map<std::string, std::string>> scopes;  // source -> unique
    int rename_counter = 0;

    const Token& peek() const { return (*toks)[at]; }
    Token next() { return (*toks)[at++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("col " + std::to_string(peek().pos) + ": " + msg);
    }
    void expect(Tok k, const std::string& what) {
        if (peek().kind != k) fail("expected " + what);
        ++at;
    }

    std::string lookup_or_intro(const std::string& source, const std::string& annot) {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto f = it->find(source);
            if (f != it->end()) {
                if (!annot.empty()) {
                    auto& vi = vars[f->second];
                    if (vi.annot.empty()) vi.annot = annot;
                    else if (vi.annot != annot) fail("variable " + source + " annotated with two sorts");
                }
                return f->second;
            }
        }
        // free variable: introduce in the outermost scope
        std::string uniq = source;
        if (vars.count(uniq)) uniq = source + "#f" + std::to_string(rename_counter++);
        scopes.front().emplace(source, uniq);
        vars[uniq] = {source, annot, -1};
        return uniq;
    }

    std::string bind(const std::string& source, const std::string& annot) {
        std::string uniq = source;
        if (vars.count(uniq)) uniq = source + "#" + std::to_string(rename_counter++);
        scopes.back().emplace(source, uniq);
        vars[uniq] = {vars.count(source) && uniq != source ? uniq : source, annot, -1};
        return uniq;
    }
};

std::unique_ptr<UNode> parse_formula_node(ParserState& ps);

// var := NAME (":" NAME)?
std::pair<std::string, std::string> parse_var_token(ParserState& ps) {
    if (ps.peek().kind != Tok::Name) ps.fail("expected a variable name");
    std::string name = ps.next().text;
    std::string annot;
    if (ps.peek().kind == Tok::Colon) {
        ps.next();
        if (ps.peek().kind != Tok::Name) ps.fail("expected a sort name after ':'");
        annot = ps.next().text;
    }
    return {name, annot};
}

std::unique_ptr<UNode> parse_primary(ParserState& ps) {
    if (ps.peek().kind == Tok::LParen) {
        ps.next();
        auto inner = parse_formula_node(ps);
        ps.expect(Tok::RParen, "')'");
        return inner;
    }
    if (ps.peek().kind != Tok::Name) ps.fail("expected an atom or '('");
    int pos = ps.peek().pos;
    std::string head = ps.next().text;
    if (ps.peek().kind == Tok::LParen && ps.sig->relation_index(head) >= 0) {
        ps.next();
        auto node = std::make_unique<UNode>();
        node->k = UNode::K::Atom;
        node->rel = head;
        node->pos = pos;
        if (ps.peek().kind != Tok::RParen) {
            while (true) {
                auto [name, annot] = parse_var_token(ps);
                node->vars.push_back(ps.lookup_or_intro(name, annot));
                if (ps.peek().kind == Tok::Comma) { ps.next(); continue; }
                break;
            }
        }
        ps.expect(Tok::RParen, "')'");
        return node;
    }
    if (ps.peek().kind == Tok::LParen)
        throw ParseError("col " + std::to_string(pos) + ": unknown relation '" + head + "'");
    // equality atom: var = var  (head already consumed; optional annotation)
    std::string annot;
    if (ps.peek().kind == Tok::Colon) {
        ps.next();
        if (ps.peek().kind != Tok::Name) ps.fail("expected a sort name after ':'");
        annot = ps.next().text;
    }
    if (ps.peek().kind != Tok::Equal) ps.fail("expected '=' or a relation atom");
    ps.next();
    auto [rhs, rannot] = parse_var_token(ps);
    auto node = std::make_unique<UNode>();
    node->k = UNode::K::Eq;
    node->pos = pos;
    node->vars.push_back(ps.lookup_or_intro(head, annot));
    node->vars.push_back(ps.lookup_or_intro(rhs, rannot));
    return node;
}

std::unique_ptr<UNode> parse_neg(ParserState& ps) {
    if (ps.peek().kind == Tok::Tilde) {
        int pos = ps.peek().pos;
        ps.next();
        auto node = std::make_unique<UNode>();
        node->k = UNode::K::Not;
        node->pos = pos;
        node->kids.push_back(parse_primary(ps));
        return node;
    }
    return parse_primary(ps);
}

std::unique_ptr<UNode> parse_conj(ParserState& ps) {
    auto first = parse_neg(ps);
    if (ps.peek().kind != Tok::Amp) return first;
    auto node = std::make_unique<UNode>();
    node->k = UNode::K::And;
    node->pos = first->pos;
    node->kids.push_back(std::move(first));
    while (ps.peek().kind == Tok::Amp) {
        ps.next();
        node->kids.push_back(parse_neg(ps));
    }
    return node;
}

std::unique_ptr<UNode> parse_disj(ParserState& ps) {
    auto first = parse_conj(ps);
    if (ps.peek().kind != Tok::Bar) return first;
    auto node = std::make_unique<UNode>();
    node->k = UNode::K::Or;
    node->pos = first->pos;
    node->kids.push_back(std::move(first));
    while (ps.peek().kind == Tok::Bar) {
        ps.next();
        node->kids.push_back(parse_conj(ps));
    }
    return node;
}

std::unique_ptr<UNode> parse_formula_node(ParserState& ps) {
    if (ps.peek().kind == Tok::Name &&
        (ps.peek().text == "exists" || ps.peek().text == "forall")) {
        bool is_forall = ps.peek().text == "forall";
        int pos = ps.next().pos;
        auto node = std::make_unique<UNode>();
        node->k = is_forall ? UNode::K::Forall : UNode::K::Exists;
        node->pos = pos;
        ps.scopes.emplace_back();
        while (ps.peek().kind == Tok::Name) {
            auto [name, annot] = parse_var_token(ps);
            node->vars.push_back(ps.bind(name, annot));
            if (ps.peek().kind == Tok::Comma) ps.next();
            if (ps.peek().kind == Tok::Dot) break;
        }
        ps.expect(Tok::Dot, "'.' after quantified variables");
        if (node->vars.empty()) ps.fail("quantifier binds no variables");
        node->kids.push_back(parse_formula_node(ps));
        ps.scopes.pop_back();
        return node;
    }
    return parse_disj(ps);
}

// --- sort resolution: union-find across equalities, constraints from atoms ---

struct SortSolver {
    std::map<std::string, int> id;
    std::vector<int> parent;
    std::vector<int> sort;
    std::vector<std::string> names;

    int get(const std::string& v) {
        auto it = id.find(v);
        if (it != id.end()) return it->second;
        int i = static_cast<int>(parent.size());
        id.emplace(v, i);
        parent.push_back(i);
        sort.push_back(-1);
        names.push_back(v);
        return i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void constrain(const std::string& v, int s, int pos) {
        int r = find(get(v));
        if (sort[r] == -1) sort[r] = s;
        else if (sort[r] != s)
            throw ParseError("col " + std::to_string(pos) + ": variable " + v +
                             " used at two different sorts");
    }
    void unify(const std::string& a, const std::string& b, int pos) {
        int ra = find(get(a)), rb = find(get(b));
        if (ra == rb) return;
        int s = sort[ra] != -1 ? sort[ra] : sort[rb];
        if (sort[ra] != -1 && sort[rb] != -1 && sort[ra] != sort[rb])
            throw ParseError("col " + std::to_string(pos) + ": equality between distinct sorts");
        parent[rb] = ra;
        sort[ra] = s;
    }
};

void collect_sorts(const UNode& n, const Signature& sig, ParserState& ps, SortSolver& ss) {
    switch (n.k) {
        case UNode::K::Atom: {
            int r = sig.relation_index(n.rel);
            const Relation& rel = sig.relation(r);
            if (n.vars.size() != rel.arity.size())
                throw ParseError("col " + std::to_string(n.pos) + ": relation " + n.rel +
                                 " expects " + std::to_string(rel.arity.size()) + " arguments");
            for (std::size_t i = 0; i < n.vars.size(); ++i)
                ss.constrain(n.vars[i], rel.arity[i], n.pos);
            break;
        }
        case UNode::K::Eq:
            ss.unify(n.vars[0], n.vars[1], n.pos);
            break;
        default:
            for (const auto& k : n.kids) collect_sorts(*k, sig, ps, ss);
            break;
    }
    // sort annotations
    for (const auto& v : n.vars) {
        const auto& vi = ps.vars[v];
        if (!vi.annot.empty()) {
            int s = sig.sort_index(vi.annot);
            if (s < 0) throw ParseError("unknown sort '" + vi.annot + "'");
            ss.constrain(v, s, n.pos);
        }
        ss.get(v);
    }
}

PosFormula build_positive(const UNode& n, SigPtr sig, ParserState& ps, SortSolver& ss) {
    auto var_of = [&](const std::string& uniq) -> Var {
        int r = ss.find(ss.get(uniq));
        return Var{uniq, ss.sort[r]};
    };
    switch (n.k) {
        case UNode::K::Atom: {
            int r = sig->relation_index(n.rel);
            std::vector<Var> args;
            for (const auto& v : n.vars) args.push_back(var_of(v));
            return PosFormula::atom(sig, r, args);
        }
        case UNode::K::Eq:
            return PosFormula::eq(sig, var_of(n.vars[0]), var_of(n.vars[1]));
        case UNode::K::And: {
            std::vector<PosFormula> kids;
            for (const auto& k : n.kids) kids.push_back(build_positive(*k, sig, ps, ss));
            return PosFormula::conj(kids);
        }
        case UNode::K::Or: {
            std::vector<PosFormula> kids;
            for (const auto& k : n.kids) kids.push_back(build_positive(*k, sig, ps, ss));
            return PosFormula::disj(kids);
        }
        case UNode::K::Exists: {
            PosFormula body = build_positive(*n.kids[0], sig, ps, ss);
            // quantified variables that do not occur in the body are padded in
            // with a trivial equality so that the binder is still represented
            std::vector<PosFormula> parts = {body};
            for (const auto& v : n.vars) {
                bool used = false;
                for (int fv : body.free())
                    if (body.vars()[fv].name == v) used = true;
                if (!used) parts.push_back(PosFormula::eq(sig, var_of(v), var_of(v)));
            }
            PosFormula padded = parts.size() == 1 ? body : PosFormula::conj(parts);
            return PosFormula::exists(n.vars, padded);
        }
        default:
            throw ParseError("col " + std::to_string(n.pos) +
                             ": '~' and 'forall' are only allowed in h-universal sentences");
    }
}

}  // namespace

std::variant<PosFormula, HuSentence> parse_formula(SigPtr sig, const std::string& text) {
    auto toks = lex(text);
    ParserState ps;
    ps.toks = &toks;
    ps.sig = sig;
    ps.scopes.emplace_back();
    auto tree = parse_formula_node(ps);
    if (ps.peek().kind != Tok::End) ps.fail("trailing input");

    SortSolver ss;
    collect_sorts(*tree, *sig, ps, ss);
    // unresolved sorts default to the unique sort when there is one
    for (std::size_t i = 0; i < ss.parent.size(); ++i) {
        int r = ss.find(static_cast<int>(i));
        if (ss.sort[r] == -1) {
            if (sig->num_sorts() == 1) ss.sort[r] = 0;
            else
                throw ParseError("cannot infer the sort of variable " + ss.names[i] +
                                 "; annotate it as name:sort");
        }
    }

    // h-universal shape: forall ... forall ~( positive )
    const UNode* cur = tree.get();
    std::vector<std::string> universals;
    while (cur->k == UNode::K::Forall) {
        universals.insert(universals.end(), cur->vars.begin(), cur->vars.end());
        cur = cur->kids[0].get();
    }
    if (!universals.empty() || cur->k == UNode::K::Not) {
        if (cur->k != UNode::K::Not)
            throw ParseError("a 'forall' sentence must negate its matrix: forall v. ~(...)");
        PosFormula matrix = build_positive(*cur->kids[0], sig, ps, ss);
        for (int fv : matrix.free()) {
            const std::string& nm = matrix.vars()[fv].name;
            if (std::find(universals.begin(), universals.end(), nm) == universals.end())
                throw ParseError("h-universal sentence has a free variable: " + nm);
        }
        auto disjuncts = pp_normal_form(matrix);
        if (disjuncts.size() != 1)
            throw ParseError("h-universal matrix must be primitive (no disjunction); "
                             "split the axiom into several sentences");
        PPFormula pp = disjuncts[0];
        // close the sentence: every free variable becomes bound
        pp.bound.insert(pp.bound.begin(), pp.free.begin(), pp.free.end());
        pp.free.clear();
        HuSentence s;
        s.matrix = std::move(pp);
        return s;
    }
    return build_positive(*tree, sig, ps, ss);
}

PosFormula parse_positive(SigPtr sig, const std::string& text) {
    auto r = parse_formula(sig, text);
    if (auto* p = std::get_if<PosFormula>(&r)) return *p;
    throw ParseError("expected a positive formula, got an h-universal sentence");
}

HuSentence parse_hu(SigPtr sig, const std::string& text) {
    auto r = parse_formula(sig, text);
    if (auto* h = std::get_if<HuSentence>(&r)) return *h;
    throw ParseError("expected an h-universal sentence");
}

}  // namespace plcore
