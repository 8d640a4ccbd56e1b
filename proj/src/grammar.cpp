#include "phrg/grammar.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <iterator>
#include <limits>

#include "phrg/canonical.hpp"

namespace phrg {

Overhead Overhead::then(const Overhead& next) const {
    return {stepFactor * next.stepFactor, stepOffset * next.stepFactor + next.stepOffset, edgeSlack + next.edgeSlack};
}

int Grammar::order() const {
    int k = 0;
    for (auto& t : tables)
        for (auto& r : t.rules) k = std::max(k, r.rhs.type());
    return k;
}

bool Grammar::isTerminalGraph(const Hypergraph& h) const {
    for (auto& e : h.edges())
        if (!terminals.count(e.label)) return false;
    return true;
}

std::set<Label> Grammar::nonterminals() const {
    std::set<Label> out;
    for (auto& l : signature.labels())
        if (!terminals.count(l)) out.insert(l);
    return out;
}

std::string tableLetter(int index) { return std::to_string(index); }

ValidationReport validate(const Grammar& g, Policy policy) {
    ValidationReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.errors.push_back(std::move(msg));
    };
    rep.tableCount = g.tables.size();
    if (g.tables.empty()) fail("grammar has no tables");
    if (!g.signature.contains(g.start)) fail("start label '" + g.start + "' is not in the signature");
    for (auto& a : g.terminals)
        if (!g.signature.contains(a)) fail("terminal '" + a + "' is not in the signature");
    if (g.emptyLabel) {
        if (!g.terminals.count(*g.emptyLabel))
            fail("erasing label '" + *g.emptyLabel + "' must be a terminal");
        else if (g.signature.typeOf(*g.emptyLabel) != 2)
            fail("erasing label '" + *g.emptyLabel + "' must have type 2");
    }
    for (std::size_t i = 0; i < g.tables.size(); ++i) {
        TableReport tr;
        tr.index = static_cast<int>(i + 1);
        std::set<Label> covered;
        for (auto& r : g.tables[i].rules) {
            std::string where = "table " + std::to_string(i + 1) + ", rule for '" + r.lhs + "': ";
            if (!g.signature.contains(r.lhs)) {
                fail(where + "lhs is not in the signature");
                continue;
            }
            covered.insert(r.lhs);
            int t = g.signature.typeOf(r.lhs);
            if (r.rhs.type() != t)
                fail(where + "rhs has type " + std::to_string(r.rhs.type()) + " but lhs has type " + std::to_string(t));
            try {
                checkTyping(r.rhs, g.signature);
            } catch (const Error& e) {
                fail(where + e.what());
            }
            tr.repetitionFree = tr.repetitionFree && r.rhs.isRepetitionFree();
            tr.proper = tr.proper && r.rhs.isProper();
        }
        tr.wellFormed = tr.repetitionFree && tr.proper;
        for (auto& l : g.signature.labels())
            if (!covered.count(l)) tr.missing.push_back(l);
        for (auto& l : tr.missing) {
            std::string msg = "table " + std::to_string(i + 1) + " has no rule for '" + l + "'";
            if (policy == Policy::Strict)
                fail(msg);
            else
                rep.notices.push_back(msg + " (identity rule added)");
        }
        rep.tables.push_back(std::move(tr));
    }
    if (g.control) {
        try {
            g.control->check();
            for (auto& a : g.control->alphabet) {
                bool okLetter = false;
                for (std::size_t i = 1; i <= g.tables.size(); ++i)
                    if (a == tableLetter(static_cast<int>(i))) okLetter = true;
                if (!okLetter) fail("control automaton letter '" + a + "' names no table");
            }
        } catch (const Error& e) {
            fail(std::string("control automaton: ") + e.what());
        }
    }
    if (rep.ok || policy == Policy::Repair) {
        rep.order = g.order();
        try {
            auto cert = synchronisationCertificate(g);
            rep.synchronised = cert.ok;
            rep.finalSymbols = cert.finals;
        } catch (const Error&) {
        }
    }
    return rep;
}

Grammar repairTotality(const Grammar& g) {
    Grammar out = g;
    for (auto& t : out.tables) {
        std::set<Label> covered;
        for (auto& r : t.rules) covered.insert(r.lhs);
        for (auto& [l, type] : out.signature.types())
            if (!covered.count(l)) t.rules.push_back({l, handle(l, type)});
    }
    return out;
}

void requireValid(const Grammar& g) {
    auto rep = validate(g);
    if (rep.ok) return;
    std::string msg = "invalid grammar:";
    for (std::size_t i = 0; i < rep.errors.size() && i < 5; ++i) msg += "\n  " + rep.errors[i];
    if (rep.errors.size() > 5) msg += "\n  ... " + std::to_string(rep.errors.size() - 5) + " more";
    throw ValidationError(msg);
}

void insertCanonical(GraphSet& set, const Hypergraph& h) {
    auto c = canonicalize(h);
    set.emplace(std::move(c.key), std::move(c.graph));
}

namespace {

constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

using Yields = std::map<Label, std::size_t>;

// Lower bound on the edge count of any terminal graph derivable from X^•,
// ignoring which tables the edges would have to share. With lettersOnly, edges
// with the empty label count zero.
Yields minimalYields(const Grammar& g, bool lettersOnly = false) {
    Yields y;
    for (auto& [l, t] : g.signature.types())
        y[l] = !g.terminals.count(l) ? kNoLimit : lettersOnly && g.emptyLabel == l ? 0 : 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& t : g.tables)
            for (auto& r : t.rules) {
                std::size_t sum = 0;
                for (auto& e : r.rhs.edges()) {
                    auto it = y.find(e.label);
                    if (it == y.end() || it->second == kNoLimit) {
                        sum = kNoLimit;
                        break;
                    }
                    sum += it->second;
                }
                auto& cur = y[r.lhs];
                if (sum < cur) {
                    cur = sum;
                    changed = true;
                }
            }
    }
    return y;
}

struct Choice {
    const Hypergraph* rhs;
    std::size_t yield;  // lower bound on the terminal edges this rhs leads to
};
using RuleIndex = std::map<Label, std::vector<Choice>>;

// With yields, rules that can never reach a terminal graph are dropped.
RuleIndex indexTable(const Table& t, const Yields* yields) {
    RuleIndex idx;
    for (auto& r : t.rules) {
        auto& slot = idx[r.lhs];
        std::size_t sum = 0;
        if (yields) {
            for (auto& e : r.rhs.edges()) {
                auto it = yields->find(e.label);
                if (it == yields->end() || it->second == kNoLimit) {
                    sum = kNoLimit;
                    break;
                }
                sum += it->second;
            }
            if (sum == kNoLimit) continue;
        }
        slot.push_back({&r.rhs, sum});
    }
    return idx;
}

// All parallel successors of h under one indexed table, keeping only those with
// at most maxEdges edges (and, when yields are known, those that can still end
// in a terminal graph within maxEdges).
using ChoiceFilter = std::function<bool(const std::vector<const Hypergraph*>&)>;

GraphSet expand(const Hypergraph& h, const RuleIndex& idx, std::size_t maxEdges, bool* hitEdges,
                const ChoiceFilter& keep = {}) {
    GraphSet out;
    std::size_t m = h.edgeCount();
    std::vector<const std::vector<Choice>*> cands(m);
    std::vector<std::size_t> minRest(m + 1, 0), minYield(m + 1, 0);
    for (std::size_t e = 0; e < m; ++e) {
        auto it = idx.find(h.edge(e).label);
        if (it == idx.end() || it->second.empty()) return out;
        cands[e] = &it->second;
    }
    for (std::size_t e = m; e-- > 0;) {
        std::size_t best = kNoLimit, bestYield = kNoLimit;
        for (auto& c : *cands[e]) {
            best = std::min(best, c.rhs->edgeCount());
            bestYield = std::min(bestYield, c.yield);
        }
        minRest[e] = minRest[e + 1] + best;
        minYield[e] = minYield[e + 1] + bestYield;
    }
    if (minRest[0] > maxEdges || minYield[0] > maxEdges) {
        if (hitEdges) *hitEdges = true;
        return out;
    }
    std::vector<const Hypergraph*> choice(m);
    // iterative DFS over choice functions
    std::vector<std::size_t> pos(m, 0);
    std::vector<std::size_t> used(m + 1, 0), usedYield(m + 1, 0);
    std::size_t e = 0;
    if (m == 0) {
        if (!keep || keep(choice)) insertCanonical(out, replaceAll(h, choice));
        return out;
    }
    while (true) {
        if (pos[e] < cands[e]->size()) {
            const Choice& c = (*cands[e])[pos[e]++];
            std::size_t total = used[e] + c.rhs->edgeCount();
            std::size_t totalYield = usedYield[e] + c.yield;
            if (total + minRest[e + 1] > maxEdges || totalYield + minYield[e + 1] > maxEdges) {
                if (hitEdges) *hitEdges = true;
                continue;
            }
            choice[e] = c.rhs;
            used[e + 1] = total;
            usedYield[e + 1] = totalYield;
            if (e + 1 == m) {
                if (!keep || keep(choice)) insertCanonical(out, replaceAll(h, choice));
            } else {
                ++e;
                pos[e] = 0;
            }
        } else {
            if (e == 0) break;
            --e;
        }
    }
    return out;
}

// Label-set abstraction of the enumeration: a graph can still reach a terminal
// graph with at most maxEdges edges iff its label set (with the control state)
// can, following one rule per label and staying within the yield bound.
class Liveness {
public:
    Liveness(const Grammar& g, const Yields& y, const Dfa& ctrl, const std::vector<int>& letterOf,
             const std::vector<bool>& useful, std::size_t maxEdges)
        : ctrl_(ctrl), letterOf_(letterOf), useful_(useful), maxEdges_(maxEdges) {
        for (auto& [l, t] : g.signature.types()) {
            id_[l] = static_cast<int>(yield_.size());
            yield_.push_back(y.at(l));
            terminal_.push_back(g.terminals.count(l) != 0);
        }
        for (auto& t : g.tables) {
            std::vector<std::set<Set>> opts(yield_.size());
            for (auto& r : t.rules) {
                Set s;
                for (auto& e : r.rhs.edges()) s.push_back(id_.at(e.label));
                std::sort(s.begin(), s.end());
                s.erase(std::unique(s.begin(), s.end()), s.end());
                if (yieldOf(s) <= maxEdges_) opts[id_.at(r.lhs)].insert(std::move(s));
            }
            std::vector<std::vector<Set>> flat;
            for (auto& o : opts) flat.emplace_back(o.begin(), o.end());
            tables_.push_back(std::move(flat));
        }
    }

    // the graph obtained by replacing every edge with the chosen right-hand sides
    bool live(const std::vector<const Hypergraph*>& choice, int q) {
        Set s;
        for (auto* rhs : choice)
            for (auto& e : rhs->edges()) s.push_back(id_.at(e.label));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return live({s, q});
    }

private:
    using Set = std::vector<int>;
    using Node = std::pair<Set, int>;
    static constexpr std::size_t kCap = 200000;

    std::size_t yieldOf(const Set& s) const {
        std::size_t sum = 0;
        for (int l : s) {
            if (yield_[l] == kNoLimit) return kNoLimit;
            sum += yield_[l];
        }
        return sum;
    }

    bool accepting(const Node& n) const {
        if (!ctrl_.finals[n.second]) return false;
        return std::all_of(n.first.begin(), n.first.end(), [&](int l) { return terminal_[l]; });
    }

    std::vector<Node> successors(const Node& n) const {
        std::vector<Node> out;
        for (std::size_t t = 0; t < tables_.size(); ++t) {
            int q = ctrl_.delta[n.second][letterOf_[t]];
            if (!useful_[q]) continue;
            std::set<Set> partial{{}};
            for (int l : n.first) {
                auto& opts = tables_[t][l];
                std::set<Set> next;
                for (auto& p : partial)
                    for (auto& o : opts) {
                        Set u;
                        std::set_union(p.begin(), p.end(), o.begin(), o.end(), std::back_inserter(u));
                        if (yieldOf(u) <= maxEdges_) next.insert(std::move(u));
                    }
                partial = std::move(next);
                if (partial.empty()) break;
            }
            for (auto& p : partial) out.push_back({p, q});
        }
        return out;
    }

    bool live(const Node& root) {
        if (gaveUp_) return true;
        if (auto it = known_.find(root); it != known_.end()) return it->second;
        // explore everything not yet decided, then propagate backwards
        std::map<Node, std::vector<Node>> graph;
        std::deque<Node> work{root};
        graph[root];
        while (!work.empty()) {
            if (graph.size() > kCap) {
                gaveUp_ = true;  // too large to decide; stop pruning
                return true;
            }
            Node n = std::move(work.front());
            work.pop_front();
            auto succ = successors(n);
            for (auto& m : succ)
                if (!known_.count(m) && graph.emplace(m, std::vector<Node>{}).second) work.push_back(m);
            graph[n] = std::move(succ);
        }
        std::map<Node, std::vector<Node>> preds;
        std::deque<Node> alive;
        std::set<Node> good;
        for (auto& [n, succ] : graph) {
            bool ok = accepting(n);
            for (auto& m : succ) {
                preds[m].push_back(n);
                if (auto it = known_.find(m); it != known_.end() && it->second) ok = true;
            }
            if (ok && good.insert(n).second) alive.push_back(n);
        }
        while (!alive.empty()) {
            Node n = std::move(alive.front());
            alive.pop_front();
            for (auto& p : preds[n])
                if (graph.count(p) && good.insert(p).second) alive.push_back(p);
        }
        for (auto& [n, succ] : graph) known_[n] = good.count(n) != 0;
        return known_.at(root);
    }

    const Dfa& ctrl_;
    const std::vector<int>& letterOf_;
    const std::vector<bool>& useful_;
    std::size_t maxEdges_;
    std::map<Label, int> id_;
    std::vector<std::size_t> yield_;
    std::vector<bool> terminal_;
    std::vector<std::vector<std::vector<Set>>> tables_;
    std::map<Node, bool> known_;
    bool gaveUp_ = false;
};

}  // namespace

GraphSet directSuccessors(const Hypergraph& h, const Table& table) {
    return expand(h, indexTable(table, nullptr), kNoLimit, nullptr);
}

GraphSet derive(const Hypergraph& h, const Trace& trace, const Grammar& g) {
    GraphSet cur;
    insertCanonical(cur, h);
    std::vector<RuleIndex> idx;
    for (auto& t : g.tables) idx.push_back(indexTable(t, nullptr));
    for (int i : trace) {
        if (i < 1 || i > static_cast<int>(g.tables.size()))
            throw Error("trace names table " + std::to_string(i) + " but the grammar has " +
                        std::to_string(g.tables.size()));
        GraphSet next;
        for (auto& [k, graph] : cur) next.merge(expand(graph, idx[i - 1], kNoLimit, nullptr));
        cur = std::move(next);
    }
    return cur;
}

std::set<Label> productiveLabels(const Grammar& g) {
    std::set<Label> p = g.terminals;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& t : g.tables)
            for (auto& r : t.rules) {
                if (p.count(r.lhs)) continue;
                bool live = std::all_of(r.rhs.edges().begin(), r.rhs.edges().end(),
                                        [&](const HyperEdge& e) { return p.count(e.label) != 0; });
                if (live) {
                    p.insert(r.lhs);
                    changed = true;
                }
            }
    }
    return p;
}

Dfa controlAutomaton(const Grammar& g) {
    std::vector<Label> letters;
    for (std::size_t i = 1; i <= g.tables.size(); ++i) letters.push_back(tableLetter(static_cast<int>(i)));
    if (!g.control) return dfaUniversal(letters);
    return extendAlphabet(complete(*g.control), letters, false);
}

namespace {

bool isIdentity(const Rule& r) {
    auto& h = r.rhs;
    return h.edgeCount() == 1 && h.edge(0).label == r.lhs && h.nodeCount() == h.ext().size() &&
           h.isRepetitionFree() && h.edge(0).att == h.ext();
}

// Step counts in [0, n] at which something can be derived.
class Steps {
public:
    explicit Steps(int n) : n_(n), w_(static_cast<std::size_t>(n) / 64 + 1, 0) {}
    static Steps at(int n, int d) {
        Steps s(n);
        s.set(d);
        return s;
    }
    void set(int d) { w_[d / 64] |= std::uint64_t(1) << (d % 64); }
    bool test(int d) const { return (w_[d / 64] >> (d % 64)) & 1; }
    bool none() const {
        return std::all_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x == 0; });
    }
    Steps& operator&=(const Steps& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    // adds o, returns whether anything was new
    bool merge(const Steps& o) {
        bool grew = false;
        for (std::size_t i = 0; i < w_.size(); ++i) {
            grew |= (o.w_[i] & ~w_[i]) != 0;
            w_[i] |= o.w_[i];
        }
        return grew;
    }
    // one more step; false when everything falls past n
    bool advance() {
        Steps out(n_);
        bool any = false;
        for (int d = 0; d < n_; ++d)
            if (test(d)) {
                out.set(d + 1);
                any = true;
            }
        *this = std::move(out);
        return any;
    }
    // every count from the smallest one on
    void idleForever() {
        for (int d = 0; d <= n_; ++d)
            if (test(d)) {
                for (int e = d + 1; e <= n_; ++e) set(e);
                return;
            }
    }

private:
    int n_;
    std::vector<std::uint64_t> w_;
};

// With one table and no control, X^• derives H in exactly d steps iff some rule
// X -> R has every edge of R deriving its part of H in exactly d-1 steps: the
// edges only share the step count. So the language is built per label instead
// of over whole sentential forms, which avoids the blowup of independently
// idling edges.
bool isBottomUpShaped(const Grammar& g) { return g.tables.size() == 1 && !g.control; }

Enumeration enumerateBottomUp(const Grammar& g, const Bounds& bounds) {
    const int n = std::max(0, bounds.maxSteps);
    struct Item {
        Hypergraph graph;
        Steps steps;
        std::size_t letters;
    };
    const std::size_t maxLetters = bounds.maxLetters ? bounds.maxLetters : kNoLimit;
    auto lettersOf = [&](const Hypergraph& h) {
        std::size_t n = 0;
        for (auto& e : h.edges()) n += g.emptyLabel != e.label;
        return n;
    };
    std::map<Label, std::map<std::string, Item>> lang;
    std::vector<const Rule*> rules;
    std::set<Label> idles;
    std::map<Label, std::vector<const Rule*>> users;
    for (auto& r : g.tables[0].rules) {
        if (isIdentity(r)) {
            idles.insert(r.lhs);
            continue;
        }
        rules.push_back(&r);
        for (auto& e : r.rhs.edges()) users[e.label].push_back(&r);
    }
    Enumeration res;
    for (auto& a : g.terminals) {
        auto c = canonicalize(handle(a, g.signature.typeOf(a)));
        Steps st = Steps::at(n, 0);
        if (idles.count(a)) st.idleForever();
        std::size_t k = lettersOf(c.graph);
        lang[a].emplace(c.key, Item{std::move(c.graph), std::move(st), k});
    }

    // what the rest of a derivation from the start must add around an X-edge
    Yields edgeYield = minimalYields(g), letterYield = minimalYields(g, true);
    Yields ctxEdges, ctxLetters;
    for (auto& [l, t] : g.signature.types()) ctxEdges[l] = ctxLetters[l] = kNoLimit;
    ctxEdges[g.start] = ctxLetters[g.start] = 0;
    auto around = [](const Yields& y, std::size_t base, const Hypergraph& h, std::size_t skip) {
        std::size_t sum = base;
        for (std::size_t f = 0; f < h.edgeCount() && sum != kNoLimit; ++f)
            if (f != skip) sum = y.at(h.edge(f).label) == kNoLimit ? kNoLimit : sum + y.at(h.edge(f).label);
        return sum;
    };
    for (bool grew = true; grew;) {
        grew = false;
        for (auto* r : rules)
            for (std::size_t e = 0; e < r->rhs.edgeCount(); ++e) {
                auto& x = r->rhs.edge(e).label;
                if (ctxEdges[r->lhs] != kNoLimit) {
                    std::size_t c = around(edgeYield, ctxEdges[r->lhs], r->rhs, e);
                    if (c < ctxEdges[x]) ctxEdges[x] = c, grew = true;
                }
                if (ctxLetters[r->lhs] != kNoLimit) {
                    std::size_t c = around(letterYield, ctxLetters[r->lhs], r->rhs, e);
                    if (c < ctxLetters[x]) ctxLetters[x] = c, grew = true;
                }
            }
    }

    std::set<const Rule*> dirty;
    for (auto* r : rules)
        if (ctxEdges[r->lhs] <= bounds.maxEdges && ctxLetters[r->lhs] <= maxLetters) dirty.insert(r);
    while (!dirty.empty()) {
        std::set<Label> changed;
        for (const Rule* r : dirty) {
            if (ctxEdges[r->lhs] > bounds.maxEdges || ctxLetters[r->lhs] > maxLetters) continue;
            const std::size_t capEdges = bounds.maxEdges - ctxEdges[r->lhs];
            const std::size_t capLetters = maxLetters == kNoLimit ? kNoLimit : maxLetters - ctxLetters[r->lhs];
            auto& h = r->rhs;
            std::size_t m = h.edgeCount();
            std::vector<std::vector<const Item*>> cands(m);
            std::vector<std::size_t> minRest(m + 1, 0), minLetters(m + 1, 0);
            bool blocked = false;
            for (std::size_t e = 0; e < m && !blocked; ++e) {
                for (auto& [k, it] : lang[h.edge(e).label]) cands[e].push_back(&it);
                blocked = cands[e].empty();
            }
            if (blocked) continue;
            for (std::size_t e = m; e-- > 0;) {
                std::size_t best = kNoLimit, bestLetters = kNoLimit;
                for (auto* it : cands[e]) {
                    best = std::min(best, it->graph.edgeCount());
                    bestLetters = std::min(bestLetters, it->letters);
                }
                minRest[e] = minRest[e + 1] + best;
                minLetters[e] = minLetters[e + 1] + bestLetters;
            }
            if (minRest[0] > capEdges || minLetters[0] > capLetters) {
                res.hitEdges = true;
                continue;
            }
            std::vector<const Hypergraph*> choice(m);
            std::vector<std::size_t> used(m + 1, 0), usedLetters(m + 1, 0);
            std::vector<Steps> common(m + 1, Steps(n));
            for (int d = 0; d <= n; ++d) common[0].set(d);
            bool idle = idles.count(r->lhs) != 0;
            auto visit = [&](auto&& rec, std::size_t e) -> void {
                if (e == m) {
                    Steps st = common[m];
                    if (!st.advance()) {
                        res.hitSteps = true;
                        return;
                    }
                    if (idle) st.idleForever();
                    auto c = canonicalize(replaceAll(h, choice));
                    auto& slot = lang[r->lhs];
                    auto it = slot.find(c.key);
                    if (it == slot.end()) {
                        slot.emplace(c.key, Item{std::move(c.graph), std::move(st), usedLetters[m]});
                        ++res.explored;
                        changed.insert(r->lhs);
                    } else if (it->second.steps.merge(st)) {
                        changed.insert(r->lhs);
                    }
                    return;
                }
                for (auto* it : cands[e]) {
                    std::size_t total = used[e] + it->graph.edgeCount();
                    std::size_t letters = usedLetters[e] + it->letters;
                    if (total + minRest[e + 1] > capEdges || letters + minLetters[e + 1] > capLetters) {
                        res.hitEdges = true;
                        continue;
                    }
                    usedLetters[e + 1] = letters;
                    common[e + 1] = common[e];
                    common[e + 1] &= it->steps;
                    if (common[e + 1].none()) continue;
                    choice[e] = &it->graph;
                    used[e + 1] = total;
                    rec(rec, e + 1);
                }
            };
            visit(visit, 0);
        }
        dirty.clear();
        for (auto& l : changed)
            for (auto* r : users[l]) dirty.insert(r);
    }

    for (auto& [k, it] : lang[g.start]) {
        if (res.graphs.size() >= bounds.maxResults) {
            res.hitResults = true;
            break;
        }
        res.graphs.emplace(k, it.graph);
    }
    return res;
}

}  // namespace

Enumeration enumerateLanguage(const Grammar& g, const Bounds& bounds, const EnumerationOptions& opts) {
    requireValid(g);
    if (opts.bottomUp && !opts.recordTraces && isBottomUpShaped(g)) return enumerateBottomUp(g, bounds);
    Enumeration res;
    Yields yields;
    if (opts.pruneDead) yields = minimalYields(g);
    std::vector<RuleIndex> idx;
    for (auto& t : g.tables) idx.push_back(indexTable(t, opts.pruneDead ? &yields : nullptr));

    Dfa ctrl = controlAutomaton(g);
    std::vector<bool> useful = usefulStates(ctrl);
    std::vector<int> letterOf;
    for (std::size_t i = 1; i <= g.tables.size(); ++i)
        letterOf.push_back(ctrl.letterIndex(tableLetter(static_cast<int>(i))));

    Yields letterYields;
    if (bounds.maxLetters) letterYields = minimalYields(g, true);
    std::optional<Liveness> live;
    if (opts.pruneDead) live.emplace(g, yields, ctrl, letterOf, useful, bounds.maxEdges);

    struct Item {
        Hypergraph graph;
        int state;
        Trace trace;
    };
    std::set<std::string> visited;
    auto visitKey = [](const std::string& k, int q) { return k + "#" + std::to_string(q); };
    auto emit = [&](const std::string& key, const Hypergraph& graph, int q, const Trace& trace) {
        if (!ctrl.finals[q] || !g.isTerminalGraph(graph)) return;
        if (res.graphs.count(key)) return;
        if (res.graphs.size() >= bounds.maxResults) {
            res.hitResults = true;
            return;
        }
        res.graphs.emplace(key, graph);
        if (opts.recordTraces) res.traces.emplace(key, trace);
    };

    std::vector<Item> frontier;
    auto start = canonicalize(handle(g.start, g.signature));
    if (!opts.pruneDead || yields[g.start] <= bounds.maxEdges) {
        if (useful[ctrl.start]) {
            visited.insert(visitKey(start.key, ctrl.start));
            emit(start.key, start.graph, ctrl.start, {});
            if (start.graph.edgeCount() <= bounds.maxEdges) frontier.push_back({start.graph, ctrl.start, {}});
        }
    }
    for (int step = 1; step <= bounds.maxSteps && !frontier.empty() && !res.hitResults; ++step) {
        std::vector<Item> next;
        for (auto& item : frontier) {
            for (std::size_t t = 0; t < g.tables.size(); ++t) {
                int q = ctrl.delta[item.state][letterOf[t]];
                if (!useful[q]) continue;
                ChoiceFilter keep;
                if (live || bounds.maxLetters)
                    keep = [&](const std::vector<const Hypergraph*>& c) {
                        if (bounds.maxLetters) {
                            std::size_t sum = 0;
                            for (auto* rhs : c)
                                for (auto& e : rhs->edges()) sum = std::min(kNoLimit - 1, sum + letterYields.at(e.label));
                            if (sum > bounds.maxLetters) return false;
                        }
                        return !live || live->live(c, q);
                    };
                auto succ = expand(item.graph, idx[t], bounds.maxEdges, &res.hitEdges, keep);
                for (auto& [key, graph] : succ) {
                    if (!visited.insert(visitKey(key, q)).second) continue;
                    ++res.explored;
                    Trace tr;
                    if (opts.recordTraces) {
                        tr = item.trace;
                        tr.push_back(static_cast<int>(t + 1));
                    }
                    emit(key, graph, q, tr);
                    next.push_back({graph, q, std::move(tr)});
                }
            }
        }
        frontier = std::move(next);
    }
    if (!frontier.empty()) res.hitSteps = true;
    return res;
}

std::optional<Label> finalTarget(const Grammar& g, const Label& x) {
    std::optional<Label> target;
    bool any = false;
    for (auto& t : g.tables)
        for (auto& r : t.rules) {
            if (r.lhs != x) continue;
            any = true;
            auto& rhs = r.rhs;
            if (rhs.edgeCount() != 1 || rhs.nodeCount() != rhs.ext().size() || !rhs.isRepetitionFree())
                return std::nullopt;
            if (rhs.edge(0).att != rhs.ext()) return std::nullopt;
            if (target && *target != rhs.edge(0).label) return std::nullopt;
            target = rhs.edge(0).label;
        }
    if (!any) return std::nullopt;
    return target;
}

SyncCertificate synchronisationCertificate(const Grammar& g) {
    SyncCertificate cert;
    int k = g.order();
    std::map<int, std::vector<Label>> selfFinal;
    for (auto& [l, type] : g.signature.types()) {
        if (g.terminals.count(l)) continue;
        auto t = finalTarget(g, l);
        if (t && *t == l) selfFinal[type].push_back(l);
    }
    for (int i = 0; i <= k; ++i) {
        if (selfFinal[i].empty()) {
            cert.reason = "no final symbol of type " + std::to_string(i);
            return cert;
        }
        cert.finals[i] = selfFinal[i].front();
    }
    for (auto& a : g.terminals) {
        auto t = finalTarget(g, a);
        int type = g.signature.typeOf(a);
        auto& fs = selfFinal[type];
        if (!t || std::find(fs.begin(), fs.end(), *t) == fs.end()) {
            cert.reason = "terminal '" + a + "' does not rewrite only to a final symbol";
            return cert;
        }
    }
    cert.ok = true;
    return cert;
}

}  // namespace phrg
