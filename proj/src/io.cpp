#include "phrg/io.hpp"

#include <fstream>
#include <sstream>

namespace phrg {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
    if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string(what) + " lacks field \"" + key + "\"");
    return *it;
}

template <class T>
T as(const Json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("field ") + what + " has the wrong JSON type");
    }
}

Json stamp(Json j, const char* kind) {
    j["format"] = kFormat;
    j["kind"] = kind;
    return j;
}

void checkFormat(const Json& j) {
    if (!j.is_object()) return;
    auto it = j.find("format");
    if (it != j.end() && *it != kFormat)
        throw ParseError("unsupported format '" + it->dump() + "', expected \"" + kFormat + "\"");
}

Json signatureJson(const Signature& sig) {
    Json labels = Json::array();
    for (auto& [l, t] : sig.types()) labels.push_back({{"name", l}, {"type", t}});
    return labels;
}

Signature signatureFromJson(const Json& j) {
    if (!j.is_array()) throw ParseError("\"labels\" must be a list");
    Signature sig;
    for (auto& e : j) {
        Label name = as<std::string>(field(e, "name", "label entry"), "name");
        int type = as<int>(field(e, "type", "label entry"), "type");
        if (type < 0) throw ParseError("label '" + name + "' has a negative type");
        if (sig.contains(name) && sig.typeOf(name) != type)
            throw ParseError("label '" + name + "' is declared with two types");
        sig.add(name, type);
    }
    return sig;
}

Json ruleJson(const Rule& r) { return {{"lhs", r.lhs}, {"rhs", toJson(r.rhs)}}; }

Rule ruleFromJson(const Json& j) {
    return {as<std::string>(field(j, "lhs", "rule"), "lhs"), hypergraphFromJson(field(j, "rhs", "rule"))};
}

std::string dotQuote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

void dotBody(std::ostringstream& os, const Hypergraph& h, const std::string& prefix, const std::string& indent) {
    for (NodeId v = 0; v < h.nodeCount(); ++v) {
        os << indent << prefix << "n" << v;
        std::string pos;
        for (std::size_t i = 0; i < h.ext().size(); ++i)
            if (h.ext()[i] == v) pos += (pos.empty() ? "" : ",") + std::to_string(i + 1);
        if (pos.empty())
            os << " [label=\"\"]";
        else
            os << " [label=" << dotQuote(pos) << ", style=filled, fillcolor=black, fontcolor=white]";
        os << ";\n";
    }
    for (EdgeId e = 0; e < h.edgeCount(); ++e) {
        auto& edge = h.edge(e);
        os << indent << prefix << "e" << e << " [shape=box, label=" << dotQuote(edge.label) << "];\n";
        for (std::size_t i = 0; i < edge.att.size(); ++i)
            os << indent << prefix << "e" << e << " -- " << prefix << "n" << edge.att[i] << " [label=\"" << i + 1
               << "\"];\n";
    }
}

}  // namespace

Json parseJson(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
        int line = 1, col = 1;
        for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        // drop nlohmann's own "[json.exception...] parse error at ...:" prefix
        auto cut = msg.find(": ", msg.find("parse error"));
        if (cut != std::string::npos) msg = msg.substr(cut + 2);
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg, line,
                         col);
    }
}

Json readJsonFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parseJson(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line(), e.column());
    }
}

std::string dumpJson(const Json& j) { return j.dump(2) + "\n"; }

std::string kindOf(const Json& j) {
    if (!j.is_object()) throw ParseError("top-level JSON value must be an object");
    checkFormat(j);
    if (auto it = j.find("kind"); it != j.end()) return as<std::string>(*it, "kind");
    if (j.contains("tables") && j.contains("alphabet")) return "et0l";
    if (j.contains("tables")) return "grammar";
    if (j.contains("rules") && j.contains("nonterminals")) return "hr";
    if (j.contains("delta")) return "dfa";
    if (j.contains("edges")) return "hypergraph";
    if (j.contains("map")) return "homomorphism";
    if (j.contains("images")) return "substitution";
    throw ParseError("cannot tell what kind of document this is");
}

Json toJson(const Hypergraph& h) {
    Json nodes = Json::array();
    for (NodeId v = 0; v < h.nodeCount(); ++v) nodes.push_back(v);
    Json edges = Json::array();
    for (EdgeId e = 0; e < h.edgeCount(); ++e)
        edges.push_back({{"id", e}, {"label", h.edge(e).label}, {"att", h.edge(e).att}});
    return {{"nodes", nodes}, {"edges", edges}, {"ext", h.ext()}};
}

Hypergraph hypergraphFromJson(const Json& j) {
    checkFormat(j);
    std::map<long long, NodeId> dense;
    auto& nodes = field(j, "nodes", "hypergraph");
    if (!nodes.is_array()) throw ParseError("\"nodes\" must be a list");
    for (auto& n : nodes) {
        long long id = as<long long>(n, "nodes");
        if (!dense.emplace(id, static_cast<NodeId>(dense.size())).second)
            throw ParseError("node " + std::to_string(id) + " listed twice");
    }
    auto node = [&](const Json& v) {
        long long id = as<long long>(v, "node reference");
        auto it = dense.find(id);
        if (it == dense.end()) throw ParseError("reference to undeclared node " + std::to_string(id));
        return it->second;
    };
    std::vector<HyperEdge> edges;
    std::map<long long, std::size_t> edgeIds;
    auto& es = field(j, "edges", "hypergraph");
    if (!es.is_array()) throw ParseError("\"edges\" must be a list");
    // edge ids only fix the order
    std::vector<std::pair<long long, HyperEdge>> tagged;
    for (auto& e : es) {
        HyperEdge edge;
        edge.label = as<std::string>(field(e, "label", "edge"), "label");
        auto& att = field(e, "att", "edge");
        if (!att.is_array()) throw ParseError("\"att\" must be a list");
        for (auto& v : att) edge.att.push_back(node(v));
        long long id = e.contains("id") ? as<long long>(e["id"], "id") : static_cast<long long>(tagged.size());
        if (!edgeIds.emplace(id, tagged.size()).second)
            throw ParseError("edge id " + std::to_string(id) + " used twice");
        tagged.emplace_back(id, std::move(edge));
    }
    for (auto& [id, idx] : edgeIds) edges.push_back(tagged[idx].second);
    std::vector<NodeId> ext;
    if (j.contains("ext")) {
        if (!j["ext"].is_array()) throw ParseError("\"ext\" must be a list");
        for (auto& v : j["ext"]) ext.push_back(node(v));
    }
    return Hypergraph(dense.size(), std::move(edges), std::move(ext));
}

Json toJson(const Dfa& d) {
    Json delta = Json::object();
    for (std::size_t q = 0; q < d.size(); ++q) {
        Json row = Json::object();
        for (std::size_t a = 0; a < d.alphabet.size(); ++a)
            if (d.delta[q][a] >= 0) row[d.alphabet[a]] = d.states[d.delta[q][a]];
        delta[d.states[q]] = row;
    }
    Json finals = Json::array();
    for (std::size_t q = 0; q < d.size(); ++q)
        if (d.finals[q]) finals.push_back(d.states[q]);
    return {{"states", d.states}, {"alphabet", d.alphabet}, {"delta", delta}, {"start", d.states.at(d.start)},
            {"finals", finals}};
}

Dfa dfaFromJson(const Json& j) {
    checkFormat(j);
    Dfa d;
    d.states = as<std::vector<std::string>>(field(j, "states", "automaton"), "states");
    d.alphabet = as<std::vector<Label>>(field(j, "alphabet", "automaton"), "alphabet");
    std::map<std::string, int> index;
    for (std::size_t q = 0; q < d.states.size(); ++q)
        if (!index.emplace(d.states[q], static_cast<int>(q)).second)
            throw ParseError("automaton state '" + d.states[q] + "' listed twice");
    auto state = [&](const std::string& s) {
        auto it = index.find(s);
        if (it == index.end()) throw ParseError("unknown automaton state '" + s + "'");
        return it->second;
    };
    d.delta.assign(d.states.size(), std::vector<int>(d.alphabet.size(), -1));
    auto& delta = field(j, "delta", "automaton");
    if (!delta.is_object()) throw ParseError("\"delta\" must be an object");
    for (auto& [from, row] : delta.items()) {
        int q = state(from);
        if (!row.is_object()) throw ParseError("transitions of state '" + from + "' must be an object");
        for (auto& [letter, to] : row.items()) {
            int a = d.letterIndex(letter);
            if (a < 0) throw ParseError("transition on letter '" + letter + "' outside the alphabet");
            d.delta[q][a] = state(as<std::string>(to, "delta target"));
        }
    }
    d.start = state(as<std::string>(field(j, "start", "automaton"), "start"));
    d.finals.assign(d.states.size(), false);
    for (auto& f : as<std::vector<std::string>>(field(j, "finals", "automaton"), "finals")) d.finals[state(f)] = true;
    try {
        d.check();
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
    return d;
}

Json toJson(const Grammar& g) {
    Json tables = Json::array();
    for (auto& t : g.tables) {
        Json rules = Json::array();
        for (auto& r : t.rules) rules.push_back(ruleJson(r));
        tables.push_back(rules);
    }
    Json j = {{"labels", signatureJson(g.signature)},
              {"terminals", g.terminals},
              {"start", g.start},
              {"tables", tables}};
    if (g.control) j["control"] = toJson(*g.control);
    if (g.emptyLabel) j["empty"] = *g.emptyLabel;
    if (g.epsilon) j["epsilon"] = true;
    if (g.overhead != Overhead{})
        j["overhead"] = {{"stepFactor", g.overhead.stepFactor},
                         {"stepOffset", g.overhead.stepOffset},
                         {"edgeSlack", g.overhead.edgeSlack}};
    return stamp(std::move(j), "grammar");
}

Grammar grammarFromJson(const Json& j) {
    checkFormat(j);
    Grammar g;
    g.signature = signatureFromJson(field(j, "labels", "grammar"));
    auto terms = as<std::vector<Label>>(field(j, "terminals", "grammar"), "terminals");
    g.terminals.insert(terms.begin(), terms.end());
    g.start = as<std::string>(field(j, "start", "grammar"), "start");
    auto& tables = field(j, "tables", "grammar");
    if (!tables.is_array()) throw ParseError("\"tables\" must be a list of rule lists");
    for (auto& t : tables) {
        if (!t.is_array()) throw ParseError("each table must be a list of rules");
        Table table;
        for (auto& r : t) table.rules.push_back(ruleFromJson(r));
        g.tables.push_back(std::move(table));
    }
    if (j.contains("control") && !j["control"].is_null()) g.control = dfaFromJson(j["control"]);
    if (j.contains("empty") && !j["empty"].is_null()) g.emptyLabel = as<std::string>(j["empty"], "empty");
    if (j.contains("epsilon")) g.epsilon = as<bool>(j["epsilon"], "epsilon");
    if (j.contains("overhead")) {
        auto& o = j["overhead"];
        g.overhead.stepFactor = o.value("stepFactor", 1);
        g.overhead.stepOffset = o.value("stepOffset", 0);
        g.overhead.edgeSlack = o.value("edgeSlack", 0);
    }
    return g;
}

Json toJson(const HrGrammar& hr) {
    Json rules = Json::array();
    for (auto& r : hr.rules) rules.push_back(ruleJson(r));
    return stamp({{"labels", signatureJson(hr.signature)},
                  {"nonterminals", hr.nonterminals},
                  {"start", hr.start},
                  {"rules", rules}},
                 "hr");
}

HrGrammar hrFromJson(const Json& j) {
    checkFormat(j);
    HrGrammar hr;
    hr.signature = signatureFromJson(field(j, "labels", "HR grammar"));
    auto nts = as<std::vector<Label>>(field(j, "nonterminals", "HR grammar"), "nonterminals");
    hr.nonterminals.insert(nts.begin(), nts.end());
    hr.start = as<std::string>(field(j, "start", "HR grammar"), "start");
    auto& rules = field(j, "rules", "HR grammar");
    if (!rules.is_array()) throw ParseError("\"rules\" must be a list");
    for (auto& r : rules) hr.rules.push_back(ruleFromJson(r));
    return hr;
}

Json wordToJson(const Word& w) {
    bool single = std::all_of(w.begin(), w.end(), [](const Label& a) {
        return !a.empty() && parseWord(a).size() == 1 && a.find_first_of(" ,\t") == std::string::npos;
    });
    if (single) return wordToString(w);
    return Json(w);
}

Word wordFromJson(const Json& j) {
    if (j.is_string()) return parseWord(j.get<std::string>());
    return as<Word>(j, "word");
}

Json toJson(const Et0lGrammar& e) {
    Json tables = Json::array();
    for (auto& t : e.tables) {
        Json rules = Json::array();
        for (auto& r : t) rules.push_back({{"lhs", r.lhs}, {"rhs", wordToJson(r.rhs)}});
        tables.push_back(rules);
    }
    return stamp({{"alphabet", e.alphabet}, {"terminals", e.terminals}, {"start", e.start}, {"tables", tables}},
                 "et0l");
}

Et0lGrammar et0lFromJson(const Json& j) {
    checkFormat(j);
    Et0lGrammar e;
    e.alphabet = as<std::vector<Label>>(field(j, "alphabet", "ET0L grammar"), "alphabet");
    auto terms = as<std::vector<Label>>(field(j, "terminals", "ET0L grammar"), "terminals");
    e.terminals.insert(terms.begin(), terms.end());
    e.start = as<std::string>(field(j, "start", "ET0L grammar"), "start");
    auto& tables = field(j, "tables", "ET0L grammar");
    if (!tables.is_array()) throw ParseError("\"tables\" must be a list of rule lists");
    for (auto& t : tables) {
        if (!t.is_array()) throw ParseError("each table must be a list of rules");
        std::vector<Et0lRule> rules;
        for (auto& r : t)
            rules.push_back({as<std::string>(field(r, "lhs", "ET0L rule"), "lhs"),
                             wordFromJson(field(r, "rhs", "ET0L rule"))});
        e.tables.push_back(std::move(rules));
    }
    return e;
}

Grammar loadGrammar(const Json& j) {
    std::string kind = kindOf(j);
    if (kind == "grammar") return grammarFromJson(j);
    if (kind == "hr") return importHR(hrFromJson(j));
    if (kind == "et0l") return importET0L(et0lFromJson(j));
    throw ParseError("expected a grammar document, got kind '" + kind + "'");
}

Json toJson(const HypergraphSubstitution& s) {
    Json images = Json::object();
    for (auto& [x, img] : s.images) {
        if (auto* graphs = std::get_if<std::vector<Hypergraph>>(&img)) {
            Json list = Json::array();
            for (auto& h : *graphs) list.push_back(toJson(h));
            images[x] = list;
        } else {
            images[x] = toJson(std::get<Grammar>(img));
        }
    }
    Json out{{"images", images}};
    if (!s.keepSelf.empty()) out["keepSelf"] = s.keepSelf;
    return stamp(out, "substitution");
}

HypergraphSubstitution substitutionFromJson(const Json& j) {
    checkFormat(j);
    HypergraphSubstitution s;
    auto& images = field(j, "images", "substitution");
    if (!images.is_object()) throw ParseError("\"images\" must be an object");
    for (auto& [x, img] : images.items()) {
        if (img.is_array()) {
            std::vector<Hypergraph> graphs;
            for (auto& h : img) graphs.push_back(hypergraphFromJson(h));
            s.images[x] = std::move(graphs);
        } else {
            s.images[x] = loadGrammar(img);
        }
    }
    if (j.contains("keepSelf")) {
        auto& keep = j.at("keepSelf");
        if (!keep.is_array()) throw ParseError("\"keepSelf\" must be a list of labels");
        for (auto& x : keep) s.keepSelf.insert(x.get<Label>());
    }
    return s;
}

Json toJson(const StringSubstitution& s) {
    Json images = Json::object();
    for (auto& [a, img] : s) {
        if (auto* words = std::get_if<std::set<Word>>(&img)) {
            Json list = Json::array();
            for (auto& w : *words) list.push_back(wordToJson(w));
            images[a] = list;
        } else {
            images[a] = toJson(std::get<Grammar>(img));
        }
    }
    return stamp({{"images", images}}, "string-substitution");
}

StringSubstitution stringSubstitutionFromJson(const Json& j) {
    checkFormat(j);
    StringSubstitution s;
    auto& images = field(j, "images", "string substitution");
    if (!images.is_object()) throw ParseError("\"images\" must be an object");
    for (auto& [a, img] : images.items()) {
        if (img.is_array()) {
            std::set<Word> words;
            for (auto& w : img) words.insert(wordFromJson(w));
            s[a] = std::move(words);
        } else {
            s[a] = loadGrammar(img);
        }
    }
    return s;
}

std::map<Label, Word> homomorphismFromJson(const Json& j) {
    checkFormat(j);
    auto& map = field(j, "map", "homomorphism");
    if (!map.is_object()) throw ParseError("\"map\" must be an object");
    std::map<Label, Word> phi;
    for (auto& [a, w] : map.items()) phi[a] = wordFromJson(w);
    return phi;
}

Json homomorphismToJson(const std::map<Label, Word>& phi) {
    Json map = Json::object();
    for (auto& [a, w] : phi) map[a] = wordToJson(w);
    return stamp({{"map", map}}, "homomorphism");
}

std::string toDot(const Hypergraph& h, const std::string& name) {
    std::ostringstream os;
    os << "graph " << dotQuote(name) << " {\n";
    os << "  node [shape=circle, width=0.25, fixedsize=true];\n";
    dotBody(os, h, "", "  ");
    os << "}\n";
    return os.str();
}

std::string toDot(const Grammar& g) {
    std::ostringstream os;
    os << "graph \"grammar\" {\n";
    os << "  compound=true;\n";
    os << "  node [shape=circle, width=0.25, fixedsize=true];\n";
    for (std::size_t t = 0; t < g.tables.size(); ++t)
        for (std::size_t r = 0; r < g.tables[t].rules.size(); ++r) {
            auto& rule = g.tables[t].rules[r];
            std::string prefix = "t" + std::to_string(t + 1) + "r" + std::to_string(r) + "_";
            os << "  subgraph \"cluster_" << prefix << "\" {\n";
            os << "    label=" << dotQuote("T" + std::to_string(t + 1) + ": " + rule.lhs + " ->") << ";\n";
            dotBody(os, rule.rhs, prefix, "    ");
            if (rule.rhs.nodeCount() == 0 && rule.rhs.edgeCount() == 0)
                os << "    " << prefix << "empty [shape=plaintext, label=\"(empty)\"];\n";
            os << "  }\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace phrg
