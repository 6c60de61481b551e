#include "plcore/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plcore/parser.hpp"

namespace plcore {

using json = nlohmann::ordered_json;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    return j;
}

SigPtr signature_from_json(const json& j, const std::string& path) {
    if (!j.contains("sorts") || !j.contains("relations"))
        throw IoError(path + ": signature needs 'sorts' and 'relations'");
    std::vector<std::string> sorts = j.at("sorts").get<std::vector<std::string>>();
    std::vector<Relation> rels;
    for (const auto& r : j.at("relations")) {
        Relation rel;
        rel.name = r.at("name").get<std::string>();
        for (const auto& s : r.at("arity")) {
            std::string sname = s.get<std::string>();
            auto it = std::find(sorts.begin(), sorts.end(), sname);
            if (it == sorts.end())
                throw IoError(path + ": relation " + rel.name + " uses unknown sort " + sname);
            rel.arity.push_back(static_cast<int>(it - sorts.begin()));
        }
        rels.push_back(std::move(rel));
    }
    return std::make_shared<Signature>(std::move(sorts), std::move(rels));
}

json signature_to_json(const Signature& sig) {
    json j;
    j["sorts"] = sig.sorts();
    j["relations"] = json::array();
    for (const Relation& r : sig.relations()) {
        json jr;
        jr["name"] = r.name;
        jr["arity"] = json::array();
        for (int s : r.arity) jr["arity"].push_back(sig.sort_name(s));
        j["relations"].push_back(jr);
    }
    return j;
}

}  // namespace

StructPtr load_structure(const std::string& path) {
    json j = read_json(path);
    SigPtr sig = signature_from_json(j, path);
    if (!j.contains("universe") || !j.contains("tables"))
        throw IoError(path + ": structure needs 'universe' and 'tables'");
    std::vector<int> sizes(sig->num_sorts(), 0);
    for (const auto& [name, val] : j.at("universe").items()) {
        int s = sig->sort_index(name);
        if (s < 0) throw IoError(path + ": universe lists unknown sort " + name);
        sizes[s] = val.get<int>();
    }
    std::vector<std::vector<Tuple>> tables(sig->num_relations());
    for (const auto& [name, val] : j.at("tables").items()) {
        int r = sig->relation_index(name);
        if (r < 0) throw IoError(path + ": tables list unknown relation " + name);
        for (const auto& t : val) tables[r].push_back(t.get<Tuple>());
    }
    StructPtr s = make_structure(sig, std::move(sizes), std::move(tables));
    auto violations = validate_structure(*s);
    if (!violations.empty()) throw IoError(path + ": " + violations.front());
    return s;
}

std::string structure_to_json(const FinStructure& s) {
    const Signature& sig = s.sig();
    json j = signature_to_json(sig);
    j["universe"] = json::object();
    for (int st = 0; st < sig.num_sorts(); ++st) j["universe"][sig.sort_name(st)] = s.size(st);
    j["tables"] = json::object();
    for (int r = 0; r < sig.num_relations(); ++r)
        j["tables"][sig.relation(r).name] = s.table(r);
    return j.dump(2) + "\n";
}

void save_structure(const FinStructure& s, const std::string& path) {
    write_file_atomic(path, structure_to_json(s));
}

HuTheory load_theory(const std::string& path) {
    json j = read_json(path);
    if (!j.contains("signature") || !j.contains("axioms"))
        throw IoError(path + ": theory needs 'signature' and 'axioms'");
    SigPtr sig = signature_from_json(j.at("signature"), path);
    std::vector<HuSentence> sentences;
    for (const auto& a : j.at("axioms")) {
        try {
            sentences.push_back(parse_hu(sig, a.get<std::string>()));
        } catch (const std::exception& e) {
            throw IoError(path + ": axiom '" + a.get<std::string>() + "': " + e.what());
        }
    }
    return HuTheory::from_sentences(sig, sentences);
}

std::string theory_to_json(const HuTheory& t) {
    json j;
    j["signature"] = signature_to_json(*t.sig);
    j["axioms"] = json::array();
    for (const auto& ax : t.axioms) j["axioms"].push_back(ax.text);
    return j.dump(2) + "\n";
}

void save_theory(const HuTheory& t, const std::string& path) {
    write_file_atomic(path, theory_to_json(t));
}

std::vector<std::vector<char>> load_base(const std::string& path, const FinStructure& u) {
    json j = read_json(path);
    if (!j.contains("base")) throw IoError(path + ": base file needs 'base'");
    auto base = TypeSpace::empty_base(u);
    for (const auto& [name, elems] : j.at("base").items()) {
        int s = u.sig().sort_index(name);
        if (s < 0) throw IoError(path + ": base lists unknown sort " + name);
        for (const auto& e : elems) {
            int id = e.get<int>();
            if (id < 0 || id >= u.size(s)) throw IoError(path + ": base element out of range");
            base[s][id] = 1;
        }
    }
    return base;
}

std::vector<std::vector<PosFormula>> load_sigmas(const std::string& path, SigPtr sig) {
    json j = read_json(path);
    std::vector<std::vector<PosFormula>> out;
    for (const auto& entry : j) {
        std::vector<PosFormula> sigma;
        for (const auto& f : entry.at("formulas"))
            sigma.push_back(parse_positive(sig, f.get<std::string>()));
        out.push_back(std::move(sigma));
    }
    return out;
}

std::string manifest_to_json(const PatternManifest& m) {
    json j;
    j["pool"] = m.pool_budget;
    j["sorts"] = m.sort_names;
    j["descriptors"] = json::array();
    for (const auto& d : m.descriptors) {
        json jd;
        jd["name"] = d.name;
        json sorts = json::array();
        for (int s : d.type_sorts) sorts.push_back(m.sort_names[s]);
        jd["sorts"] = sorts;
        jd["phis"] = d.phis;
        jd["alpha"] = d.alpha;
        j["descriptors"].push_back(jd);
    }
    j["projections"] = json::array();
    for (const auto& p : m.pis) {
        json jp;
        jp["name"] = p.name;
        jp["from"] = m.sort_names[p.from_sort];
        jp["positions"] = p.positions;
        jp["to"] = m.sort_names[p.to_sort];
        j["projections"].push_back(jp);
    }
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << content;
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("rename failed: " + path);
}

}  // namespace plcore
