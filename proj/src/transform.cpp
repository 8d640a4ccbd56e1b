#include "phrg/transform.hpp"

#include <algorithm>
#include <deque>

#include "phrg/canonical.hpp"
#include "phrg/fresh.hpp"

namespace phrg {

int HrGrammar::order() const {
    int k = 0;
    for (auto& r : rules) k = std::max(k, r.rhs.type());
    return k;
}

std::set<Label> HrGrammar::terminals() const {
    std::set<Label> out;
    for (auto& [l, t] : signature.types())
        if (!nonterminals.count(l)) out.insert(l);
    return out;
}

void requireValidHr(const HrGrammar& hr) {
    std::vector<std::string> errs;
    if (!hr.signature.contains(hr.start)) errs.push_back("start '" + hr.start + "' is not in the signature");
    for (auto& n : hr.nonterminals)
        if (!hr.signature.contains(n)) errs.push_back("nonterminal '" + n + "' is not in the signature");
    for (auto& r : hr.rules) {
        if (!hr.nonterminals.count(r.lhs)) {
            errs.push_back("rule lhs '" + r.lhs + "' is not a nonterminal");
            continue;
        }
        if (hr.signature.typeOf(r.lhs) != r.rhs.type())
            errs.push_back("rule for '" + r.lhs + "' has rhs of type " + std::to_string(r.rhs.type()));
        if (!isTyped(r.rhs, hr.signature)) errs.push_back("rule for '" + r.lhs + "' has an ill-typed rhs");
    }
    if (errs.empty()) return;
    std::string msg = "invalid HR grammar: " + errs.front();
    if (errs.size() > 1) msg += " (and " + std::to_string(errs.size() - 1) + " more)";
    throw ValidationError(msg);
}

GraphSet hrSuccessors(const HrGrammar& hr, const Hypergraph& h) {
    std::map<Label, std::vector<const Hypergraph*>> idx;
    for (auto& r : hr.rules) idx[r.lhs].push_back(&r.rhs);
    GraphSet out;
    for (EdgeId e = 0; e < h.edgeCount(); ++e) {
        auto it = idx.find(h.edge(e).label);
        if (it == idx.end()) continue;
        for (auto* rhs : it->second) insertCanonical(out, replace(h, {{e, *rhs}}));
    }
    return out;
}

HrEnumeration enumerateHrLanguage(const HrGrammar& hr, const Bounds& bounds) {
    requireValidHr(hr);
    HrEnumeration res;
    auto terminal = [&](const Hypergraph& h) {
        return std::none_of(h.edges().begin(), h.edges().end(),
                            [&](const HyperEdge& e) { return hr.nonterminals.count(e.label) != 0; });
    };
    std::set<std::string> seen;
    GraphSet frontier;
    insertCanonical(frontier, handle(hr.start, hr.signature));
    for (auto& [k, h] : frontier) seen.insert(k);
    for (int step = 0; !frontier.empty(); ++step) {
        GraphSet next;
        for (auto& [k, h] : frontier) {
            if (terminal(h)) {
                if (res.graphs.size() >= bounds.maxResults) {
                    res.truncated = true;
                    return res;
                }
                res.graphs.emplace(k, h);
                continue;
            }
            if (step == bounds.maxSteps) {
                res.truncated = true;
                continue;
            }
            // derivations are order independent, so rewriting the first nonterminal suffices
            GraphSet succ;
            for (EdgeId e = 0; e < h.edgeCount(); ++e) {
                if (!hr.nonterminals.count(h.edge(e).label)) continue;
                for (auto& r : hr.rules)
                    if (r.lhs == h.edge(e).label) insertCanonical(succ, replace(h, {{e, r.rhs}}));
                break;
            }
            for (auto& [k2, h2] : succ) {
                if (h2.edgeCount() > bounds.maxEdges) {
                    res.truncated = true;
                    continue;
                }
                if (seen.insert(k2).second) next.emplace(k2, h2);
            }
        }
        frontier = std::move(next);
    }
    return res;
}

Grammar importHR(const HrGrammar& hr) {
    requireValidHr(hr);
    Grammar g;
    g.signature = hr.signature;
    g.terminals = hr.terminals();
    g.start = hr.start;
    Table t;
    t.rules = hr.rules;
    for (auto& [l, type] : hr.signature.types()) t.rules.push_back({l, handle(l, type)});
    g.tables.push_back(std::move(t));
    return g;
}

namespace {

bool isHandleOf(const Hypergraph& h, const Label& l) {
    return h.edgeCount() == 1 && h.edge(0).label == l && h.nodeCount() == h.ext().size() && h.isRepetitionFree() &&
           h.edge(0).att == h.ext();
}

}  // namespace

std::optional<HrGrammar> asHR(const Grammar& g) {
    if (g.tables.size() != 1 || g.control) return std::nullopt;
    HrGrammar hr;
    hr.signature = g.signature;
    hr.start = g.start;
    for (auto& [l, t] : g.signature.types())
        if (!g.terminals.count(l)) hr.nonterminals.insert(l);
    std::set<Label> withIdentity;
    for (auto& r : g.tables[0].rules) {
        if (isHandleOf(r.rhs, r.lhs)) {
            withIdentity.insert(r.lhs);
            continue;
        }
        if (g.terminals.count(r.lhs)) return std::nullopt;
        hr.rules.push_back(r);
    }
    if (withIdentity.size() != g.signature.size()) return std::nullopt;
    return hr;
}

Grammar renameLabels(const Grammar& g, const std::function<Label(const Label&)>& f) {
    Grammar out;
    for (auto& [l, t] : g.signature.types()) out.signature.add(f(l), t);
    for (auto& a : g.terminals) out.terminals.insert(f(a));
    out.start = f(g.start);
    for (auto& t : g.tables) {
        Table nt;
        for (auto& r : t.rules) nt.rules.push_back({f(r.lhs), relabel(r.rhs, f)});
        out.tables.push_back(std::move(nt));
    }
    out.control = g.control;
    if (g.emptyLabel) out.emptyLabel = f(*g.emptyLabel);
    out.epsilon = g.epsilon;
    out.overhead = g.overhead;
    return out;
}

namespace {

// Block index of every position under the equality partition of `att`.
std::vector<int> partitionOf(const std::vector<NodeId>& att) {
    std::vector<int> blocks;
    std::map<NodeId, int> seen;
    for (NodeId v : att) {
        auto [it, fresh] = seen.emplace(v, static_cast<int>(seen.size()));
        blocks.push_back(it->second);
    }
    return blocks;
}

bool isDiscrete(const std::vector<int>& pi) {
    for (std::size_t i = 0; i < pi.size(); ++i)
        if (pi[i] != static_cast<int>(i)) return false;
    return true;
}

int blockCount(const std::vector<int>& pi) {
    int n = 0;
    for (int b : pi) n = std::max(n, b + 1);
    return n;
}

}  // namespace

Grammar properize(const Grammar& g) {
    requireValid(g);
    FreshNames fresh(g.signature);
    std::map<std::pair<Label, std::vector<int>>, Label> names;
    std::deque<std::pair<Label, std::vector<int>>> work;
    Grammar out;
    out.start = g.start;
    out.control = g.control;
    out.emptyLabel = g.emptyLabel;
    out.epsilon = g.epsilon;
    out.overhead = g.overhead;
    out.tables.resize(g.tables.size());

    auto nameOf = [&](const Label& x, const std::vector<int>& pi) -> Label {
        if (isDiscrete(pi)) {
            if (!out.signature.contains(x)) {
                out.signature.add(x, g.signature.typeOf(x));
                if (g.terminals.count(x)) out.terminals.insert(x);
                work.push_back({x, pi});
            }
            return x;
        }
        auto key = std::make_pair(x, pi);
        auto it = names.find(key);
        if (it != names.end()) return it->second;
        std::string hint = x + "|";
        for (std::size_t i = 0; i < pi.size(); ++i) hint += (i ? "," : "") + std::to_string(pi[i]);
        Label n = fresh.make("(" + hint + ")");
        names.emplace(key, n);
        out.signature.add(n, blockCount(pi));
        work.push_back(key);
        return n;
    };
    // Relabels improper edges by their partition and drops the repeated tentacles.
    auto makeProper = [&](const Hypergraph& h) {
        std::vector<HyperEdge> edges;
        for (auto& e : h.edges()) {
            auto pi = partitionOf(e.att);
            std::vector<NodeId> att;
            for (std::size_t i = 0; i < e.att.size(); ++i)
                if (pi[i] == static_cast<int>(att.size())) att.push_back(e.att[i]);
            edges.push_back({nameOf(e.label, pi), std::move(att)});
        }
        return Hypergraph(h.nodeCount(), std::move(edges), h.ext());
    };

    std::vector<int> startPi(g.signature.typeOf(g.start));
    for (std::size_t i = 0; i < startPi.size(); ++i) startPi[i] = static_cast<int>(i);
    nameOf(g.start, startPi);
    for (auto& a : g.terminals) {
        std::vector<int> pi(g.signature.typeOf(a));
        for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = static_cast<int>(i);
        nameOf(a, pi);
    }
    while (!work.empty()) {
        auto [x, pi] = work.front();
        work.pop_front();
        Label lhs = isDiscrete(pi) ? x : names.at({x, pi});
        int blocks = blockCount(pi);
        for (std::size_t t = 0; t < g.tables.size(); ++t)
            for (auto& r : g.tables[t].rules) {
                if (r.lhs != x) continue;
                Hypergraph rhs = r.rhs;
                if (!isDiscrete(pi)) {
                    // glue the rhs onto a handle whose tentacles repeat per pi
                    std::vector<NodeId> att;
                    Hypergraph host(blocks, {}, {});
                    for (int b : pi) att.push_back(static_cast<NodeId>(b));
                    EdgeId e = host.addEdge(x, att);
                    std::vector<NodeId> ext;
                    for (int b = 0; b < blocks; ++b) ext.push_back(static_cast<NodeId>(b));
                    host.setExt(ext);
                    rhs = replace(host, {{e, r.rhs}});
                }
                out.tables[t].rules.push_back({lhs, makeProper(rhs)});
            }
    }
    return out;
}

Grammar eliminateUnreachable(const Grammar& g) {
    requireValid(g);
    // Tables are total, so a label is reachable iff the rule graph reaches it.
    std::set<Label> reach{g.start};
    std::deque<Label> work{g.start};
    std::map<Label, std::set<Label>> succ;
    for (auto& t : g.tables)
        for (auto& r : t.rules)
            for (auto& l : r.rhs.labels()) succ[r.lhs].insert(l);
    while (!work.empty()) {
        Label x = work.front();
        work.pop_front();
        for (auto& y : succ[x])
            if (reach.insert(y).second) work.push_back(y);
    }
    if (g.emptyLabel) reach.insert(*g.emptyLabel);
    Grammar out = g;
    out.signature = Signature();
    for (auto& [l, t] : g.signature.types())
        if (reach.count(l)) out.signature.add(l, t);
    out.terminals.clear();
    for (auto& a : g.terminals)
        if (reach.count(a)) out.terminals.insert(a);
    for (auto& t : out.tables) {
        std::vector<Rule> kept;
        for (auto& r : t.rules) {
            if (!reach.count(r.lhs)) continue;
            kept.push_back(r);
        }
        t.rules = std::move(kept);
    }
    return out;
}

Grammar reduceTablesToTwo(const Grammar& input) {
    Grammar g = input.control ? removeControl(input) : input;
    requireValid(g);
    const int l = static_cast<int>(g.tables.size());
    if (l < 2) return g;
    FreshNames fresh(g.signature);
    Grammar out;
    out.signature = g.signature;
    out.terminals = g.terminals;
    out.start = g.start;
    out.emptyLabel = g.emptyLabel;
    out.epsilon = g.epsilon;
    std::map<std::pair<Label, int>, Label> phase;
    for (auto& [a, type] : g.signature.types())
        for (int i = 1; i <= l; ++i) {
            Label n = fresh.make("[" + a + "," + std::to_string(i) + "]");
            phase[{a, i}] = n;
            out.signature.add(n, type);
        }
    Table t1, t2;
    for (auto& [a, type] : g.signature.types()) {
        t1.rules.push_back({a, handle(phase[{a, 1}], type)});
        for (int i = 1; i <= l; ++i) t1.rules.push_back({phase[{a, i}], handle(phase[{a, i % l + 1}], type)});
        t2.rules.push_back({a, handle(a, type)});
    }
    for (int i = 1; i <= l; ++i)
        for (auto& r : g.tables[i - 1].rules) t2.rules.push_back({phase[{r.lhs, i}], r.rhs});
    out.tables = {std::move(t1), std::move(t2)};
    out.overhead = g.overhead.then({l + 1, 0, 0});
    return out;
}

namespace {

// Label map sending terminals to their barred copies.
struct Barring {
    std::map<Label, Label> bar;

    Label operator()(const Label& l) const {
        auto it = bar.find(l);
        return it == bar.end() ? l : it->second;
    }
    Hypergraph apply(const Hypergraph& h) const {
        return relabel(h, [this](const Label& l) { return (*this)(l); });
    }
};

Barring makeBarring(const Grammar& g, Signature& sig, FreshNames& fresh) {
    Barring b;
    for (auto& a : g.terminals) {
        Label n = fresh.make(a + "~");
        b.bar[a] = n;
        sig.add(n, g.signature.typeOf(a));
    }
    return b;
}

std::vector<Label> makeFinals(int k, Signature& sig, FreshNames& fresh) {
    std::vector<Label> fin;
    for (int i = 0; i <= k; ++i) {
        fin.push_back(fresh.make("F" + std::to_string(i)));
        sig.add(fin.back(), i);
    }
    return fin;
}

}  // namespace

Grammar removeControl(const Grammar& g) {
    requireValid(g);
    if (!g.control) return g;
    Dfa m = controlAutomaton(g);
    const int l = static_cast<int>(g.tables.size());
    FreshNames fresh(g.signature);
    Grammar out;
    out.signature = g.signature;
    out.terminals = g.terminals;
    out.emptyLabel = g.emptyLabel;
    out.epsilon = g.epsilon && m.acceptsEpsilon();
    out.start = fresh.make(g.start + "'");
    out.signature.add(out.start, g.signature.typeOf(g.start));
    std::vector<Label> state;
    for (std::size_t q = 0; q < m.size(); ++q) {
        state.push_back(fresh.make("q" + std::to_string(q)));
        out.signature.add(state.back(), 0);
    }
    Barring bar = makeBarring(g, out.signature, fresh);
    int k = g.signature.maxType();
    std::vector<Label> fin = makeFinals(k, out.signature, fresh);
    auto toF = [&](const Label& x) {
        int t = out.signature.typeOf(x);
        return Rule{x, handle(fin[t], t)};
    };

    Table t0;
    t0.rules.push_back({out.start, disjointUnion(bar.apply(handle(g.start, g.signature)), handle(state[m.start], 0))});
    for (std::size_t q = 0; q < m.size(); ++q) {
        if (m.finals[q])
            t0.rules.push_back({state[q], Hypergraph()});
        else
            t0.rules.push_back(toF(state[q]));
    }
    for (auto& [a, b] : bar.bar) t0.rules.push_back({b, handle(a, g.signature)});
    for (auto& [x, t] : g.signature.types()) t0.rules.push_back(toF(x));
    for (auto& f : fin) t0.rules.push_back(toF(f));
    out.tables.push_back(std::move(t0));

    for (int j = 1; j <= l; ++j) {
        Table tj;
        int letter = m.letterIndex(tableLetter(j));
        for (auto& r : g.tables[j - 1].rules) {
            Label lhs = g.terminals.count(r.lhs) ? bar(r.lhs) : r.lhs;
            tj.rules.push_back({lhs, bar.apply(r.rhs)});
        }
        for (std::size_t q = 0; q < m.size(); ++q) tj.rules.push_back({state[q], handle(state[m.delta[q][letter]], 0)});
        tj.rules.push_back({out.start, handle(out.start, out.signature)});
        for (auto& a : g.terminals) tj.rules.push_back({a, handle(a, g.signature)});
        for (auto& f : fin) tj.rules.push_back({f, handle(f, out.signature)});
        out.tables.push_back(std::move(tj));
    }
    out.overhead = g.overhead.then({1, 2, 1});
    return out;
}

namespace {

struct Synced {
    Grammar g;
    std::vector<Label> finals;
};

Synced synchroniseWith(const Grammar& input, FreshNames& fresh) {
    Grammar g = input.control ? removeControl(input) : input;
    requireValid(g);
    fresh.reserve(g.signature);
    Grammar out;
    out.signature = g.signature;
    out.terminals = g.terminals;
    out.emptyLabel = g.emptyLabel;
    out.epsilon = g.epsilon;
    out.start = fresh.make(g.start + "'");
    out.signature.add(out.start, g.signature.typeOf(g.start));
    int k = g.signature.maxType();
    std::vector<Label> fin = makeFinals(k, out.signature, fresh);
    Barring bar = makeBarring(g, out.signature, fresh);
    for (auto& t : g.tables) {
        Table nt;
        for (auto& a : g.terminals) {
            int type = g.signature.typeOf(a);
            nt.rules.push_back({a, handle(fin[type], type)});
            nt.rules.push_back({bar(a), handle(a, type)});
        }
        for (auto& r : t.rules) {
            Label lhs = g.terminals.count(r.lhs) ? bar(r.lhs) : r.lhs;
            nt.rules.push_back({lhs, bar.apply(r.rhs)});
        }
        nt.rules.push_back({out.start, bar.apply(handle(g.start, g.signature))});
        for (auto& f : fin) nt.rules.push_back({f, handle(f, out.signature)});
        out.tables.push_back(std::move(nt));
    }
    out.overhead = g.overhead.then({1, 2, 0});
    return {std::move(out), std::move(fin)};
}

}  // namespace

Grammar synchronise(const Grammar& g) {
    FreshNames fresh;
    return synchroniseWith(g, fresh).g;
}

HrGrammar embedHR(const Grammar& g) {
    Grammar s = synchronise(g);
    HrGrammar hr;
    hr.signature = s.signature;
    hr.start = s.start;
    for (auto& [l, t] : s.signature.types())
        if (!s.terminals.count(l)) hr.nonterminals.insert(l);
    std::set<std::pair<Label, std::string>> seen;
    for (auto& t : s.tables)
        for (auto& r : t.rules) {
            if (s.terminals.count(r.lhs)) continue;
            if (seen.insert({r.lhs, canonicalForm(r.rhs)}).second) hr.rules.push_back(r);
        }
    return hr;
}

bool HypergraphSubstitution::isNested() const {
    for (auto& [x, img] : images) {
        if (keepSelf.count(x)) continue;
        auto* finite = std::get_if<std::vector<Hypergraph>>(&img);
        if (!finite || finite->empty()) return false;
        int t = finite->front().type();
        Hypergraph self = handle(x, t);
        bool found = std::any_of(finite->begin(), finite->end(), [&](const Hypergraph& h) { return isIsomorphic(h, self); });
        if (!found) return false;
    }
    return true;
}

Grammar finiteGrammar(const std::vector<Hypergraph>& graphs, const Signature& sig, int type) {
    Signature s = sig;
    for (auto& h : graphs) {
        if (h.type() != type)
            throw TypeMismatch("finite image graph has type " + std::to_string(h.type()) + ", expected " +
                               std::to_string(type));
        checkTyping(h, s);
    }
    FreshNames fresh(s);
    Grammar g;
    g.start = fresh.make("S");
    g.signature = s;
    g.signature.add(g.start, type);
    for (auto& [l, t] : s.types()) g.terminals.insert(l);
    int k = std::max(type, s.maxType());
    std::vector<Label> fin = makeFinals(k, g.signature, fresh);
    Table t;
    for (auto& h : graphs) t.rules.push_back({g.start, h});
    if (graphs.empty()) t.rules.push_back({g.start, handle(fin[type], type)});
    for (auto& [l, ty] : s.types()) t.rules.push_back({l, handle(fin[ty], ty)});
    for (auto& f : fin) t.rules.push_back({f, handle(f, g.signature)});
    g.tables.push_back(std::move(t));
    return g;
}

namespace {

// Every label of g renamed to a fresh "hint:label" name.
std::map<Label, Label> renameAll(const Grammar& g, const std::string& tag, FreshNames& fresh) {
    std::map<Label, Label> m;
    for (auto& [l, t] : g.signature.types()) m[l] = fresh.make(tag + l);
    return m;
}

Grammar applyMap(const Grammar& g, const std::map<Label, Label>& m) {
    return renameLabels(g, [&](const Label& l) {
        auto it = m.find(l);
        return it == m.end() ? l : it->second;
    });
}

void checkImageType(const Grammar& g, const Label& x, int type) {
    int t = g.signature.typeOf(g.start);
    if (t != type)
        throw TypeMismatch("image of '" + x + "' has type " + std::to_string(t) + " but '" + x + "' has type " +
                           std::to_string(type));
}

// Table rules for labels the given rule set misses, sending them to `fallback`.
Table overrideWith(std::vector<Rule> rules, const Signature& sig, const std::function<Rule(const Label&, int)>& fallback) {
    std::set<Label> covered;
    for (auto& r : rules) covered.insert(r.lhs);
    Table t;
    t.rules = std::move(rules);
    for (auto& [l, type] : sig.types())
        if (!covered.count(l)) t.rules.push_back(fallback(l, type));
    return t;
}

// Shared scaffolding for the multi-table substitution and iteration grammars:
// a hatted copy of g, barred copies of every image, and the decode tables.
struct SubstBuilder {
    FreshNames fresh;
    Signature sig;
    std::set<Label> terminals;
    std::vector<Label> fin;

    Rule identity(const Label& l, int t) const { return {l, handle(l, t)}; }
    Rule failure(const Label& l, int t) const { return {l, handle(fin.at(t), t)}; }

    Table keep(std::vector<Rule> rules) const {
        return overrideWith(std::move(rules), sig, [this](const Label& l, int t) { return identity(l, t); });
    }
    Table kill(std::vector<Rule> rules) const {
        return overrideWith(std::move(rules), sig, [this](const Label& l, int t) {
            bool isFinal = std::find(fin.begin(), fin.end(), l) != fin.end();
            return isFinal ? identity(l, t) : failure(l, t);
        });
    }
};

struct ImageCopy {
    Grammar g;  // renamed copy; terminals are the barred image terminals
    Label start;
    std::map<Label, Label> barredTerminal;  // barred -> real
};

Grammar withoutControl(const Grammar& g) { return g.control ? removeControl(g) : g; }

ImageCopy copyImage(const Grammar& img, const std::string& tag, FreshNames& fresh) {
    Grammar g = withoutControl(img);
    requireValid(g);
    // The start gets an identity rule to delay the image. That is only
    // harmless when the start never comes back, so otherwise put a fresh one
    // in front.
    bool recurs = g.terminals.count(g.start) != 0;
    for (auto& t : g.tables)
        for (auto& r : t.rules) recurs |= r.rhs.labels().count(g.start) != 0;
    if (recurs) {
        int type = g.signature.typeOf(g.start);
        Label s0 = fresh.make(tag + "start");
        g.signature.add(s0, type);
        for (auto& t : g.tables) t.rules.push_back({s0, handle(g.start, type)});
        g.start = s0;
    }
    auto m = renameAll(g, tag, fresh);
    ImageCopy c;
    c.g = applyMap(g, m);
    c.start = m.at(g.start);
    for (auto& a : g.terminals) c.barredTerminal[m.at(a)] = a;
    return c;
}

// Simulation tables and decode table for one image copy.
void addImageTables(SubstBuilder& b, const ImageCopy& c, std::vector<Table>& tables) {
    for (auto& t : c.g.tables) {
        std::vector<Rule> rules = t.rules;
        rules.push_back(b.identity(c.start, c.g.signature.typeOf(c.start)));
        tables.push_back(b.keep(std::move(rules)));
    }
    std::vector<Rule> decode;
    for (auto& [l, type] : c.g.signature.types()) {
        if (l == c.start) continue;
        auto it = c.barredTerminal.find(l);
        if (it != c.barredTerminal.end())
            decode.push_back({l, handle(it->second, type)});
        else
            decode.push_back(b.failure(l, type));
    }
    tables.push_back(b.keep(std::move(decode)));
}

int maxTypeOf(const Grammar& g, const GrammarSubstitution& s) {
    int k = g.signature.maxType();
    for (auto& [x, img] : s) k = std::max(k, img.signature.maxType());
    return k;
}

void reserveImages(FreshNames& fresh, const GrammarSubstitution& s) {
    for (auto& [x, img] : s) fresh.reserve(img.signature);
}

Grammar substituteSingleTable(const HrGrammar& hr, const Grammar& g, const GrammarSubstitution& s) {
    // one table: HR rules, identities, terminals jump to image starts
    FreshNames fresh(g.signature);
    reserveImages(fresh, s);
    int k = maxTypeOf(g, s);
    Grammar out;
    std::vector<Label> fin = makeFinals(k, out.signature, fresh);
    auto hat = renameAll(g, "^", fresh);
    std::vector<Rule> rules;
    for (auto& r : hr.rules) rules.push_back({hat.at(r.lhs), relabel(r.rhs, [&](const Label& l) { return hat.at(l); })});
    for (auto& [l, t] : g.signature.types()) {
        out.signature.add(hat.at(l), t);
        rules.push_back({hat.at(l), handle(hat.at(l), t)});
    }
    std::set<Label> imageTerminals;
    for (auto& a : g.terminals) {
        auto it = s.find(a);
        int type = g.signature.typeOf(a);
        if (it == s.end()) {
            out.signature.add(a, type);
            imageTerminals.insert(a);
            rules.push_back({hat.at(a), handle(a, type)});
            continue;
        }
        checkImageType(it->second, a, type);
        auto synced = synchroniseWith(it->second, fresh);
        // share the final symbols, keep the image's other non-terminals apart
        std::map<Label, Label> m;
        for (std::size_t i = 0; i < synced.finals.size(); ++i) m[synced.finals[i]] = fin[i];
        for (auto& [l, t] : synced.g.signature.types())
            if (!synced.g.terminals.count(l) && !m.count(l)) m[l] = fresh.make(a + ":" + l);
        Grammar img = applyMap(synced.g, m);
        for (auto& [l, t] : img.signature.types()) out.signature.add(l, t);
        for (auto& b : img.terminals) imageTerminals.insert(b);
        rules.push_back({hat.at(a), handle(img.start, type)});
        for (auto& r : img.tables[0].rules)
            if (!img.terminals.count(r.lhs) && std::find(fin.begin(), fin.end(), r.lhs) == fin.end()) rules.push_back(r);
    }
    for (auto& b : imageTerminals) {
        int t = out.signature.typeOf(b);
        rules.push_back({b, handle(fin[t], t)});
    }
    for (auto& f : fin) rules.push_back({f, handle(f, out.signature)});
    out.terminals = imageTerminals;
    out.start = hat.at(g.start);
    out.tables.push_back(Table{std::move(rules)});
    out.overhead = {1, 3, 0};
    return out;
}

}  // namespace

Grammar substituteFinite(const Grammar& input, const FiniteSubstitution& s) {
    requireValid(input);
    Grammar g = withoutControl(input);
    FreshNames fresh(g.signature);
    Signature images;
    for (auto& [x, graphs] : s) {
        if (!g.terminals.count(x)) throw UnknownLabel(x);
        for (auto& h : graphs) {
            if (h.type() != g.signature.typeOf(x))
                throw TypeMismatch("image of '" + x + "' has type " + std::to_string(h.type()) + " but '" + x +
                                   "' has type " + std::to_string(g.signature.typeOf(x)));
            for (auto& e : h.edges()) images.add(e.label, static_cast<int>(e.att.size()));
        }
    }
    fresh.reserve(images);
    auto hat = renameAll(g, "^", fresh);
    Grammar ghat = applyMap(g, hat);
    auto synced = synchroniseWith(ghat, fresh);
    Grammar& sg = synced.g;

    // s' on the hatted alphabet
    std::map<Label, std::vector<Hypergraph>> sp;
    Signature outSig;
    std::set<Label> b;
    for (auto& a : g.terminals) {
        auto it = s.find(a);
        int type = g.signature.typeOf(a);
        if (it == s.end()) {
            sp[hat.at(a)] = {handle(a, type)};
            outSig.add(a, type);
            b.insert(a);
        } else {
            sp[hat.at(a)] = it->second;
        }
    }
    for (auto& [l, t] : images.types()) {
        outSig.add(l, t);
        b.insert(l);
    }
    Grammar out;
    out.signature = outSig;
    for (auto& [l, t] : sg.signature.types())
        if (!sg.terminals.count(l)) out.signature.add(l, t);
    out.terminals = b;
    out.start = sg.start;
    out.overhead = sg.overhead;
    int k = std::max(sg.signature.maxType(), images.maxType());
    std::vector<Label> fin = synced.finals;
    for (int i = static_cast<int>(fin.size()); i <= k; ++i) {
        fin.push_back(fresh.make("F" + std::to_string(i)));
        out.signature.add(fin.back(), i);
    }
    for (auto& t : sg.tables) {
        Table nt;
        for (auto& r : t.rules) {
            if (sg.terminals.count(r.lhs)) continue;
            // all combinations of images for the terminal edges of the rhs
            std::vector<EdgeId> slots;
            for (EdgeId e = 0; e < r.rhs.edgeCount(); ++e)
                if (sp.count(r.rhs.edge(e).label)) slots.push_back(e);
            std::vector<std::size_t> pick(slots.size(), 0);
            bool emptyChoice = std::any_of(slots.begin(), slots.end(),
                                           [&](EdgeId e) { return sp.at(r.rhs.edge(e).label).empty(); });
            if (emptyChoice) continue;
            while (true) {
                std::map<EdgeId, Hypergraph> sigma;
                for (std::size_t i = 0; i < slots.size(); ++i)
                    sigma.emplace(slots[i], sp.at(r.rhs.edge(slots[i]).label)[pick[i]]);
                nt.rules.push_back({r.lhs, sigma.empty() ? r.rhs : replace(r.rhs, sigma)});
                std::size_t i = 0;
                while (i < slots.size() && ++pick[i] == sp.at(r.rhs.edge(slots[i]).label).size()) pick[i++] = 0;
                if (i == slots.size()) break;
            }
        }
        for (auto& x : b) {
            int type = out.signature.typeOf(x);
            nt.rules.push_back({x, handle(fin[type], type)});
        }
        for (int i = static_cast<int>(synced.finals.size()); i <= k; ++i) nt.rules.push_back({fin[i], handle(fin[i], i)});
        out.tables.push_back(overrideWith(std::move(nt.rules), out.signature,
                                          [&](const Label& l, int ty) { return Rule{l, handle(fin[ty], ty)}; }));
    }
    return out;
}

Grammar substituteGrammars(const Grammar& input, const GrammarSubstitution& s) {
    requireValid(input);
    for (auto& [x, img] : s) {
        if (!input.terminals.count(x)) throw UnknownLabel(x);
        requireValid(img);
        checkImageType(img, x, input.signature.typeOf(x));
    }
    if (auto hr = asHR(input)) {
        bool single = std::all_of(s.begin(), s.end(),
                                  [](const auto& kv) { return kv.second.tables.size() == 1 && !kv.second.control; });
        if (single) return substituteSingleTable(*hr, input, s);
    }
    Grammar g = withoutControl(input);
    SubstBuilder b;
    b.fresh.reserve(g.signature);
    reserveImages(b.fresh, s);
    int k = maxTypeOf(g, s);
    b.fin = makeFinals(k, b.sig, b.fresh);
    auto hat = renameAll(g, "^", b.fresh);
    Grammar ghat = applyMap(g, hat);
    for (auto& [l, t] : ghat.signature.types()) b.sig.add(l, t);

    std::map<Label, ImageCopy> copies;
    std::vector<Rule> switchRules;
    for (auto& a : g.terminals) {
        int type = g.signature.typeOf(a);
        auto it = s.find(a);
        if (it == s.end()) {
            b.sig.add(a, type);
            b.terminals.insert(a);
            switchRules.push_back({hat.at(a), handle(a, type)});
            continue;
        }
        ImageCopy c = copyImage(it->second, a + ":", b.fresh);
        for (auto& [l, t] : c.g.signature.types()) b.sig.add(l, t);
        for (auto& [barred, real] : c.barredTerminal) {
            b.sig.add(real, c.g.signature.typeOf(barred));
            b.terminals.insert(real);
        }
        switchRules.push_back({hat.at(a), handle(c.start, type)});
        copies.emplace(a, std::move(c));
    }

    Grammar out;
    for (auto& t : ghat.tables) out.tables.push_back(b.keep(t.rules));
    out.tables.push_back(b.kill(std::move(switchRules)));
    for (auto& [a, c] : copies) addImageTables(b, c, out.tables);
    out.signature = b.sig;
    out.terminals = b.terminals;
    out.start = ghat.start;
    out.overhead = {1, 2 + 3 * static_cast<int>(copies.size()), 0};
    return out;
}

Grammar substitute(const Grammar& g, const HypergraphSubstitution& in) {
    HypergraphSubstitution s = in;
    for (auto& x : in.keepSelf) {
        auto it = s.images.find(x);
        if (it == s.images.end()) continue;
        auto* finite = std::get_if<std::vector<Hypergraph>>(&it->second);
        if (!finite) throw UnsupportedShape("keepSelf with a grammar image is only supported when iterating");
        finite->push_back(handle(x, g.signature.typeOf(x)));
    }
    bool allFinite = std::all_of(s.images.begin(), s.images.end(), [](const auto& kv) {
        return std::holds_alternative<std::vector<Hypergraph>>(kv.second);
    });
    if (allFinite && g.tables.size() == 1) {
        FiniteSubstitution f;
        for (auto& [x, img] : s.images) f[x] = std::get<std::vector<Hypergraph>>(img);
        return substituteFinite(g, f);
    }
    GrammarSubstitution gs;
    for (auto& [x, img] : s.images) {
        if (!g.signature.contains(x)) throw UnknownLabel(x);
        if (auto* finite = std::get_if<std::vector<Hypergraph>>(&img)) {
            Signature sig;
            for (auto& h : *finite)
                for (auto& e : h.edges()) sig.add(e.label, static_cast<int>(e.att.size()));
            gs[x] = finiteGrammar(*finite, sig, g.signature.typeOf(x));
        } else {
            gs[x] = std::get<Grammar>(img);
        }
    }
    return substituteGrammars(g, gs);
}

Grammar iterateSubstitutions(const Grammar& input, const std::vector<HypergraphSubstitution>& subs) {
    requireValid(input);
    Grammar g = withoutControl(input);
    std::vector<GrammarSubstitution> gsubs;
    for (auto& s : subs) {
        GrammarSubstitution gs;
        for (auto& [x, img] : s.images) {
            if (!g.terminals.count(x)) throw UnknownLabel(x);
            int type = g.signature.typeOf(x);
            if (auto* finite = std::get_if<std::vector<Hypergraph>>(&img)) {
                Signature sig;
                for (auto& h : *finite)
                    for (auto& e : h.edges()) sig.add(e.label, static_cast<int>(e.att.size()));
                gs[x] = finiteGrammar(*finite, sig, type);
            } else {
                requireValid(std::get<Grammar>(img));
                gs[x] = std::get<Grammar>(img);
            }
            checkImageType(gs[x], x, type);
        }
        gsubs.push_back(std::move(gs));
    }

    SubstBuilder b;
    b.fresh.reserve(g.signature);
    int k = g.signature.maxType();
    for (auto& gs : gsubs) {
        reserveImages(b.fresh, gs);
        k = std::max(k, maxTypeOf(g, gs));
    }
    b.fin = makeFinals(k, b.sig, b.fresh);
    auto hat = renameAll(g, "^", b.fresh);
    Grammar ghat = applyMap(g, hat);
    for (auto& [l, t] : ghat.signature.types()) b.sig.add(l, t);
    for (auto& a : g.terminals) {
        b.sig.add(a, g.signature.typeOf(a));
        b.terminals.insert(a);
    }

    // one restart table per substitution, then the image tables
    std::vector<std::vector<Rule>> switches(gsubs.size());
    std::vector<ImageCopy> copies;
    for (std::size_t j = 0; j < gsubs.size(); ++j) {
        for (auto& a : g.terminals) {
            int type = g.signature.typeOf(a);
            auto it = gsubs[j].find(a);
            if (it == gsubs[j].end() || subs[j].keepSelf.count(a)) switches[j].push_back({a, handle(a, type)});
            if (it == gsubs[j].end()) continue;
            ImageCopy c = copyImage(it->second, std::to_string(j + 1) + ":" + a + ":", b.fresh);
            for (auto& [l, t] : c.g.signature.types()) b.sig.add(l, t);
            for (auto& [barred, real] : c.barredTerminal) {
                b.sig.add(real, c.g.signature.typeOf(barred));
                b.terminals.insert(real);
            }
            switches[j].push_back({a, handle(c.start, type)});
            copies.push_back(std::move(c));
        }
    }
    Grammar out;
    for (auto& t : ghat.tables) out.tables.push_back(b.keep(t.rules));
    std::vector<Rule> decode;
    for (auto& a : g.terminals) decode.push_back({hat.at(a), handle(a, g.signature)});
    out.tables.push_back(b.kill(std::move(decode)));
    for (auto& sw : switches) out.tables.push_back(b.kill(std::move(sw)));
    for (auto& c : copies) addImageTables(b, c, out.tables);
    out.signature = b.sig;
    out.terminals = b.terminals;
    out.start = ghat.start;
    out.overhead = {1, 1, 0};
    return out;
}

Grammar applyTransform(const std::string& name, const Grammar& g) {
    if (name == "properize") return properize(g);
    if (name == "unreachable") return eliminateUnreachable(g);
    if (name == "tables2") return reduceTablesToTwo(g);
    if (name == "nocontrol") return removeControl(g);
    if (name == "sync") return synchronise(g);
    throw UnsupportedShape("unknown transformation '" + name + "'");
}

}  // namespace phrg
