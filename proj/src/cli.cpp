#include "phrg/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "phrg/canonical.hpp"
#include "phrg/decide.hpp"
#include "phrg/et0l.hpp"
#include "phrg/io.hpp"
#include "phrg/strings.hpp"
#include "phrg/transform.hpp"

namespace phrg::cli {

namespace {

struct Options {
    int maxSteps = 8;
    std::size_t maxEdges = 32;
    std::size_t maxLen = 12;
    std::size_t maxResults = 10000;
    std::string format;  // empty: the verb's default
    std::string output;
    long long seed = 0;  // accepted and ignored; everything is deterministic

    std::vector<std::string> inputs;
    std::string name;  // transform / import / export / stringop selector
    std::string word;
    std::string trace;
    std::string graph;
    std::string policy = "strict";
    std::vector<std::string> substs;
    std::string map;
    bool explain = false;
    bool strings = false;
};

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    int validateCmd();
    int deriveCmd();
    int enumerateCmd();
    int emptyCmd();
    int memberCmd();
    int transformCmd();
    int intersectCmd();
    int importCmd();
    int exportCmd();
    int stringopCmd();
    int renderCmd();

private:
    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;

    std::string format(const std::string& fallback, std::initializer_list<const char*> allowed) const {
        std::string f = o_.format.empty() ? fallback : o_.format;
        for (auto* a : allowed)
            if (f == a) return f;
        throw Error("--format " + f + " is not available for this command");
    }

    void emit(const std::string& text) const {
        if (o_.output.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(o_.output, std::ios::binary);
        if (!f) throw Error("cannot write '" + o_.output + "'");
        f << text;
    }

    Grammar grammarAt(std::size_t i) const {
        Grammar g = loadGrammar(readJsonFile(o_.inputs.at(i)));
        if (o_.policy == "repair") g = repairTotality(g);
        requireValid(g);
        return g;
    }

    void emitGrammar(const Grammar& g) const {
        std::string f = format("json", {"json", "dot"});
        emit(f == "dot" ? toDot(g) : dumpJson(toJson(g)));
    }

    Bounds bounds() const { return {o_.maxSteps, o_.maxEdges, o_.maxResults}; }

    void warnTruncated(bool steps, bool edges, bool results) const {
        if (!(steps || edges || results)) return;
        std::string why;
        auto add = [&](bool b, const char* s) {
            if (b) why += (why.empty() ? "" : ", ") + std::string(s);
        };
        add(steps, "--max-steps");
        add(edges, "--max-edges");
        add(results, "--max-results");
        err_ << "warning: bounds reached (" << why << "); the output may be incomplete\n";
    }

    void emitGraphs(const GraphSet& graphs, bool truncated, const Grammar* g = nullptr) const;
    void emitWords(const std::set<Word>& words, bool truncated) const;
};

std::string describe(const Hypergraph& h, const Grammar* g) {
    std::optional<Label> empty = g ? g->emptyLabel : std::nullopt;
    if (auto w = strOf(h, empty)) return "string \"" + wordToString(*w) + "\"";
    std::ostringstream os;
    os << h.nodeCount() << " nodes, " << h.edgeCount() << " edges:";
    for (auto& e : h.edges()) {
        os << ' ' << e.label << '(';
        for (std::size_t i = 0; i < e.att.size(); ++i) os << (i ? "," : "") << e.att[i];
        os << ')';
    }
    os << " ext(";
    for (std::size_t i = 0; i < h.ext().size(); ++i) os << (i ? "," : "") << h.ext()[i];
    os << ')';
    return os.str();
}

std::string labelSetText(const LabelSet& x) {
    std::string s = "{";
    bool first = true;
    for (auto& l : x) {
        s += (first ? "" : ", ") + l;
        first = false;
    }
    return s + "}";
}

void Runner::emitGraphs(const GraphSet& graphs, bool truncated, const Grammar* g) const {
    std::string f = format("text", {"json", "dot", "text"});
    std::ostringstream os;
    if (f == "json") {
        Json list = Json::array();
        for (auto& [k, h] : graphs) list.push_back(toJson(h));
        os << dumpJson({{"format", kFormat}, {"kind", "graph-set"}, {"graphs", list}, {"truncated", truncated}});
    } else if (f == "dot") {
        int i = 0;
        for (auto& [k, h] : graphs) os << toDot(h, "G" + std::to_string(++i));
    } else {
        for (auto& [k, h] : graphs) os << describe(h, g) << '\n';
        os << graphs.size() << " graph" << (graphs.size() == 1 ? "" : "s") << '\n';
    }
    emit(os.str());
}

void Runner::emitWords(const std::set<Word>& words, bool truncated) const {
    std::string f = format("text", {"json", "text"});
    std::ostringstream os;
    if (f == "json") {
        Json list = Json::array();
        for (auto& w : words) list.push_back(wordToJson(w));
        os << dumpJson({{"format", kFormat}, {"kind", "word-set"}, {"words", list}, {"truncated", truncated}});
    } else {
        // shortlex order reads better than lexicographic
        std::vector<Word> sorted(words.begin(), words.end());
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Word& a, const Word& b) { return a.size() < b.size(); });
        for (auto& w : sorted) os << wordToString(w) << '\n';
    }
    emit(os.str());
}

int Runner::validateCmd() {
    Grammar g = loadGrammar(readJsonFile(o_.inputs.at(0)));
    Policy policy = o_.policy == "repair" ? Policy::Repair : Policy::Strict;
    ValidationReport rep = validate(g, policy);
    std::string f = format("text", {"json", "text"});
    std::ostringstream os;
    if (f == "json") {
        Json tables = Json::array();
        for (auto& t : rep.tables)
            tables.push_back({{"index", t.index},
                              {"missing", t.missing},
                              {"repetitionFree", t.repetitionFree},
                              {"proper", t.proper},
                              {"wellFormed", t.wellFormed}});
        Json finals = Json::object();
        for (auto& [k, l] : rep.finalSymbols) finals[std::to_string(k)] = l;
        os << dumpJson({{"format", kFormat},
                        {"kind", "validation-report"},
                        {"ok", rep.ok},
                        {"errors", rep.errors},
                        {"notices", rep.notices},
                        {"order", rep.order},
                        {"tableCount", rep.tableCount},
                        {"tables", tables},
                        {"synchronised", rep.synchronised},
                        {"finalSymbols", finals}});
    } else {
        os << "ok: " << (rep.ok ? "yes" : "no") << '\n';
        os << "order: " << rep.order << '\n';
        os << "tables: " << rep.tableCount << '\n';
        for (auto& t : rep.tables) {
            os << "table " << t.index << ": " << (t.missing.empty() ? "total" : "partial") << ", "
               << (t.repetitionFree ? "repetition-free" : "has repetitions") << ", "
               << (t.proper ? "proper" : "improper") << '\n';
        }
        os << "synchronised: " << (rep.synchronised ? "yes" : "no");
        if (rep.synchronised) {
            os << " (finals";
            for (auto& [k, l] : rep.finalSymbols) os << ' ' << k << ':' << l;
            os << ')';
        }
        os << '\n';
        for (auto& n : rep.notices) os << "notice: " << n << '\n';
        for (auto& e : rep.errors) os << "error: " << e << '\n';
    }
    if (policy == Policy::Repair && rep.ok && !o_.output.empty()) {
        // with --policy repair, -o receives the repaired grammar
        std::ofstream fo(o_.output, std::ios::binary);
        if (!fo) throw Error("cannot write '" + o_.output + "'");
        fo << dumpJson(toJson(repairTotality(g)));
        out_ << os.str();
    } else {
        emit(os.str());
    }
    return rep.ok ? kOk : kUsage;
}

int Runner::deriveCmd() {
    Grammar g = grammarAt(0);
    Trace trace;
    for (auto& tok : parseWord(o_.trace)) {
        try {
            std::size_t used = 0;
            int i = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            trace.push_back(i);
        } catch (const std::exception&) {
            throw Error("--trace expects table indices like 1,2,1; got '" + tok + "'");
        }
    }
    Hypergraph start = o_.graph.empty() ? handle(g.start, g.signature) : hypergraphFromJson(readJsonFile(o_.graph));
    emitGraphs(derive(start, trace, g), false, &g);
    return kOk;
}

int Runner::enumerateCmd() {
    Grammar g = grammarAt(0);
    if (o_.strings) {
        StringBounds sb{o_.maxLen, o_.maxSteps, 0, o_.maxResults};
        auto lang = stringLanguage(g, sb);
        if (lang.truncated) err_ << "warning: bounds reached; the word list may be incomplete\n";
        if (lang.sawNonString) err_ << "notice: some terminal graphs are not string graphs and were skipped\n";
        emitWords(lang.words, lang.truncated);
        return kOk;
    }
    auto en = enumerateLanguage(g, bounds());
    warnTruncated(en.hitSteps, en.hitEdges, en.hitResults);
    emitGraphs(en.graphs, en.truncated(), &g);
    return kOk;
}

int Runner::emptyCmd() {
    Grammar g = grammarAt(0);
    auto res = decideEmptiness(g);
    std::ostringstream os;
    os << (res.empty ? "empty" : "nonempty") << '\n';
    if (o_.explain) {
        os << "label sets explored: " << res.explored << '\n';
        for (auto& [x, t] : res.witness)
            os << (t == 0 ? "  " : "  --T" + std::to_string(t) + "--> ") << labelSetText(x) << '\n';
    }
    emit(os.str());
    return res.empty ? kNo : kOk;
}

int Runner::memberCmd() {
    Grammar g = grammarAt(0);
    Word w = parseWord(o_.word);
    auto res = decideMembership(g, w);
    std::ostringstream os;
    os << (res.member ? "member" : "not a member") << '\n';
    if (!res.notice.empty()) err_ << "notice: " << res.notice << '\n';
    if (o_.explain) {
        os << "label sets explored: " << res.emptiness.explored << '\n';
        for (auto& [x, t] : res.emptiness.witness)
            os << (t == 0 ? "  " : "  --T" + std::to_string(t) + "--> ") << labelSetText(x) << '\n';
    }
    emit(os.str());
    return res.member ? kOk : kNo;
}

int Runner::transformCmd() {
    const std::string& n = o_.name;
    if (n == "import-hr") {
        emitGrammar(importHR(hrFromJson(readJsonFile(o_.inputs.at(0)))));
        return kOk;
    }
    Grammar g = grammarAt(0);
    if (n == "embed-hr") {
        format("json", {"json"});
        emit(dumpJson(toJson(embedHR(g))));
        return kOk;
    }
    if (n == "subst" || n == "iter-subst") {
        if (o_.substs.empty()) throw Error("transform " + n + " needs --subst FILE");
        std::vector<HypergraphSubstitution> subs;
        for (auto& p : o_.substs) subs.push_back(substitutionFromJson(readJsonFile(p)));
        if (n == "subst") {
            if (subs.size() != 1) throw Error("transform subst takes exactly one --subst");
            emitGrammar(substitute(g, subs[0]));
        } else {
            emitGrammar(iterateSubstitutions(g, subs));
        }
        return kOk;
    }
    emitGrammar(applyTransform(n, g));
    return kOk;
}

int Runner::intersectCmd() {
    Grammar g = grammarAt(0);
    Dfa d = dfaFromJson(readJsonFile(o_.inputs.at(1)));
    IntersectionReport rep;
    Grammar out = intersectRegular(g, d, &rep);
    for (auto& n : rep.notices) err_ << "notice: " << n << '\n';
    emitGrammar(out);
    return kOk;
}

int Runner::importCmd() {
    Json j = readJsonFile(o_.inputs.at(0));
    if (o_.name == "et0l")
        emitGrammar(importET0L(et0lFromJson(j)));
    else if (o_.name == "hr")
        emitGrammar(importHR(hrFromJson(j)));
    else
        throw Error("import expects et0l or hr, got '" + o_.name + "'");
    return kOk;
}

int Runner::exportCmd() {
    Grammar g = grammarAt(0);
    format("json", {"json"});
    if (o_.name == "et0l")
        emit(dumpJson(toJson(exportET0L(g))));
    else if (o_.name == "hr")
        emit(dumpJson(toJson(embedHR(g))));
    else
        throw Error("export expects et0l or hr, got '" + o_.name + "'");
    return kOk;
}

int Runner::stringopCmd() {
    const std::string& n = o_.name;
    auto needInputs = [&](std::size_t k) {
        if (o_.inputs.size() != k)
            throw Error("stringop " + n + " takes " + std::to_string(k) + " grammar file" + (k == 1 ? "" : "s"));
    };
    auto phi = [&] {
        if (o_.map.empty()) throw Error("stringop " + n + " needs --map FILE");
        return homomorphismFromJson(readJsonFile(o_.map));
    };
    if (n == "interpret") {
        needInputs(1);
        Et0lGrammar e = et0lFromJson(readJsonFile(o_.inputs[0]));
        emitWords(et0lInterpret(e, o_.maxLen), false);
        return kOk;
    }
    if (n == "union" || n == "concat" || n == "free-product") {
        needInputs(2);
        Grammar a = grammarAt(0), b = grammarAt(1);
        emitGrammar(n == "union" ? unionL(a, b) : n == "concat" ? concatL(a, b) : freeProductWP(a, b));
        return kOk;
    }
    needInputs(1);
    Grammar g = grammarAt(0);
    if (n == "plus") {
        emitGrammar(plusL(g));
    } else if (n == "hom") {
        emitGrammar(applyHomomorphism(g, phi()));
    } else if (n == "weak") {
        emitGrammar(applyWeakCoding(g, phi()));
    } else if (n == "inverse") {
        emitGrammar(inverseHomomorphism(g, phi()));
    } else if (n == "subst") {
        if (o_.substs.size() != 1) throw Error("stringop subst needs exactly one --subst FILE");
        emitGrammar(applyStringSubstitution(g, stringSubstitutionFromJson(readJsonFile(o_.substs[0]))));
    } else {
        throw Error("unknown string operation '" + n + "'");
    }
    return kOk;
}

int Runner::renderCmd() {
    format("dot", {"dot"});
    Json j = readJsonFile(o_.inputs.at(0));
    std::string kind = kindOf(j);
    if (kind == "hypergraph")
        emit(toDot(hypergraphFromJson(j)));
    else
        emit(toDot(loadGrammar(j)));
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Parallel hyperedge replacement grammar toolkit", "phrg"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--max-steps", o.maxSteps, "derivation step bound")->check(CLI::PositiveNumber);
    app.add_option("--max-edges", o.maxEdges, "edge bound for sentential forms")->check(CLI::PositiveNumber);
    app.add_option("--max-len", o.maxLen, "word length bound")->check(CLI::PositiveNumber);
    app.add_option("--max-results", o.maxResults, "result count bound")->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "dot", "text"}));
    app.add_option("-o,--output", o.output, "write to this file instead of stdout");
    app.add_option("--seed", o.seed, "reserved; the engine is deterministic");
    app.add_option("--policy", o.policy, "totality policy")->check(CLI::IsMember({"strict", "repair"}));

    auto input = [&](CLI::App* sub, const char* what = "grammar file") {
        sub->add_option("input", o.inputs, what)->required()->expected(1);
    };
    auto* validate = app.add_subcommand("validate", "check a grammar and report its shape");
    input(validate);
    auto* derive = app.add_subcommand("derive", "apply tables along a trace");
    input(derive);
    derive->add_option("--trace", o.trace, "table indices, e.g. 1,1,2")->required();
    derive->add_option("--graph", o.graph, "start hypergraph (default: the start handle)");
    auto* enumerate = app.add_subcommand("enumerate", "bounded language enumeration");
    input(enumerate);
    enumerate->add_flag("--strings", o.strings, "list the string language instead of graphs");
    auto* empty = app.add_subcommand("empty", "decide emptiness (exit 1 when empty)");
    input(empty);
    empty->add_flag("--explain", o.explain, "print the label-set witness chain");
    auto* member = app.add_subcommand("member", "decide string membership (exit 1 when not a member)");
    input(member);
    member->add_option("--word", o.word, "the word; letters are characters or space separated")->required();
    member->add_flag("--explain", o.explain, "print the label-set witness chain");
    auto* transform = app.add_subcommand("transform", "grammar to grammar constructions");
    transform->add_option("name", o.name, "transformation")
        ->required()
        ->check(CLI::IsMember({"properize", "unreachable", "tables2", "nocontrol", "sync", "embed-hr",
                               "import-hr", "subst", "iter-subst"}));
    input(transform);
    transform->add_option("--subst", o.substs, "substitution file (repeatable for iter-subst)");
    auto* intersect = app.add_subcommand("intersect", "intersect the string language with a DFA");
    intersect->add_option("input", o.inputs, "grammar file, then DFA file")->required()->expected(2);
    auto* import = app.add_subcommand("import", "convert an ET0L or HR grammar");
    import->add_option("kind", o.name, "et0l or hr")->required()->check(CLI::IsMember({"et0l", "hr"}));
    input(import, "ET0L or HR grammar file");
    auto* exportCmd = app.add_subcommand("export", "convert to an ET0L or HR grammar");
    exportCmd->add_option("kind", o.name, "et0l or hr")->required()->check(CLI::IsMember({"et0l", "hr"}));
    input(exportCmd);
    auto* stringop = app.add_subcommand("stringop", "string language operators");
    stringop->add_option("op", o.name, "operation")
        ->required()
        ->check(CLI::IsMember(
            {"union", "concat", "plus", "subst", "hom", "weak", "inverse", "free-product", "interpret"}));
    stringop->add_option("input", o.inputs, "grammar files")->required()->expected(1, 2);
    stringop->add_option("--map", o.map, "homomorphism file");
    stringop->add_option("--subst", o.substs, "string substitution file");
    auto* render = app.add_subcommand("render", "DOT for a hypergraph or grammar");
    input(render, "hypergraph or grammar file");
    for (auto* s : app.get_subcommands({})) s->fallthrough();

    std::vector<char*> argv;
    std::vector<std::string> copy = args;
    for (auto& a : copy) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Runner r(o, out, err);
    try {
        if (validate->parsed()) return r.validateCmd();
        if (derive->parsed()) return r.deriveCmd();
        if (enumerate->parsed()) return r.enumerateCmd();
        if (empty->parsed()) return r.emptyCmd();
        if (member->parsed()) return r.memberCmd();
        if (transform->parsed()) return r.transformCmd();
        if (intersect->parsed()) return r.intersectCmd();
        if (import->parsed()) return r.importCmd();
        if (exportCmd->parsed()) return r.exportCmd();
        if (stringop->parsed()) return r.stringopCmd();
        if (render->parsed()) return r.renderCmd();
    } catch (const UnsupportedShape& e) {
        err << "unsupported: " << e.what() << '\n';
        return kUnsupported;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace phrg::cli
