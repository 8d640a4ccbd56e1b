#include "phrg/decide.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "phrg/fresh.hpp"
#include "phrg/strings.hpp"
#include "phrg/transform.hpp"

namespace phrg {

LabelSet labelsOf(const Hypergraph& h) { return h.labels(); }

Hypergraph labelSetGraph(const LabelSet& x, const Signature& sig) {
    Hypergraph out;
    for (auto& l : x) out = disjointUnion(out, handle(l, sig), ExtPolicy::Drop);
    return out;
}

std::set<LabelSet> labelSetSuccessors(const LabelSet& x, const Table& table) {
    std::map<Label, std::set<LabelSet>> rhsSets;
    for (auto& r : table.rules) rhsSets[r.lhs].insert(r.rhs.labels());
    std::set<LabelSet> partial{{}};
    for (auto& a : x) {
        auto it = rhsSets.find(a);
        if (it == rhsSets.end()) return {};
        std::set<LabelSet> next;
        for (auto& p : partial)
            for (auto& r : it->second) {
                LabelSet u = p;
                u.insert(r.begin(), r.end());
                next.insert(std::move(u));
            }
        partial = std::move(next);
    }
    return partial;
}

std::set<LabelSet> reachableLabelSets(const Grammar& g) {
    std::set<LabelSet> seen;
    std::deque<LabelSet> work{{g.start}};
    while (!work.empty()) {
        LabelSet x = std::move(work.front());
        work.pop_front();
        for (auto& t : g.tables)
            for (auto& y : labelSetSuccessors(x, t))
                if (seen.insert(y).second) work.push_back(y);
    }
    return seen;
}

namespace {

// Subset of a fixed label universe.
struct Bits {
    std::vector<std::uint64_t> w;

    explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
    void set(std::size_t i) { w[i / 64] |= std::uint64_t(1) << (i % 64); }
    bool test(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }
    bool subsetOf(const Bits& o) const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] & ~o.w[i]) return false;
        return true;
    }
    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] & o.w[i]) return true;
        return false;
    }
    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
        return *this;
    }
    int count() const {
        int c = 0;
        for (auto x : w) c += __builtin_popcountll(x);
        return c;
    }
    bool operator<(const Bits& o) const { return w < o.w; }
    bool operator==(const Bits& o) const { return w == o.w; }
};

// Keep only the subset-minimal members.
std::vector<Bits> minimal(std::vector<Bits> v) {
    std::sort(v.begin(), v.end(), [](const Bits& a, const Bits& b) {
        int ca = a.count(), cb = b.count();
        return ca != cb ? ca < cb : a < b;
    });
    std::vector<Bits> out;
    for (auto& b : v) {
        bool dominated = false;
        for (auto& o : out)
            if (o.subsetOf(b)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(std::move(b));
    }
    return out;
}

}  // namespace

EmptinessResult decideEmptiness(const Grammar& g) {
    requireValid(g);
    EmptinessResult res;
    std::vector<Label> names = g.signature.labels();
    std::map<Label, std::size_t> id;
    for (std::size_t i = 0; i < names.size(); ++i) id[names[i]] = i;
    std::size_t n = names.size();
    auto toBits = [&](const LabelSet& s) {
        Bits b(n);
        for (auto& l : s) b.set(id.at(l));
        return b;
    };
    auto toSet = [&](const Bits& b) {
        LabelSet s;
        for (std::size_t i = 0; i < n; ++i)
            if (b.test(i)) s.insert(names[i]);
        return s;
    };

    Bits terminal = toBits(g.terminals);
    std::set<Label> productive = productiveLabels(g);
    Dfa ctrl = controlAutomaton(g);
    std::vector<bool> useful = usefulStates(ctrl);

    // minimal rhs label sets per (table, label); rules reaching a dead label are dropped
    std::vector<std::vector<std::vector<Bits>>> rules(g.tables.size(), std::vector<std::vector<Bits>>(n));
    for (std::size_t t = 0; t < g.tables.size(); ++t) {
        for (auto& r : g.tables[t].rules) {
            auto ls = r.rhs.labels();
            bool live = std::all_of(ls.begin(), ls.end(), [&](const Label& l) { return productive.count(l) != 0; });
            if (live) rules[t][id.at(r.lhs)].push_back(toBits(ls));
        }
        for (auto& v : rules[t]) v = minimal(std::move(v));
    }

    struct Node {
        Bits set;
        int state;
        int parent;
        int table;
    };
    std::vector<Node> nodes;
    std::vector<std::vector<std::size_t>> byState(ctrl.size());
    auto finish = [&](std::size_t k) {
        res.empty = false;
        std::vector<std::pair<LabelSet, int>> chain;
        for (long i = static_cast<long>(k); i >= 0; i = nodes[i].parent) chain.push_back({toSet(nodes[i].set), nodes[i].table});
        std::reverse(chain.begin(), chain.end());
        res.witness = std::move(chain);
    };

    if (!productive.count(g.start) || !useful[ctrl.start]) return res;
    Bits s0 = toBits({g.start});
    nodes.push_back({s0, ctrl.start, -1, 0});
    byState[ctrl.start].push_back(0);
    if (s0.subsetOf(terminal) && ctrl.finals[ctrl.start]) {
        finish(0);
        return res;
    }
    std::vector<int> letter;
    for (std::size_t t = 1; t <= g.tables.size(); ++t) letter.push_back(ctrl.letterIndex(tableLetter(static_cast<int>(t))));

    for (std::size_t k = 0; k < nodes.size(); ++k) {
        ++res.explored;
        for (std::size_t t = 0; t < g.tables.size(); ++t) {
            int q = ctrl.delta[nodes[k].state][letter[t]];
            if (!useful[q]) continue;
            // fold label by label, keeping only minimal partial unions
            std::vector<Bits> partial{Bits(n)};
            bool blocked = false;
            for (std::size_t i = 0; i < n && !blocked; ++i) {
                if (!nodes[k].set.test(i)) continue;
                auto& rs = rules[t][i];
                if (rs.empty()) {
                    blocked = true;
                    break;
                }
                std::vector<Bits> next;
                for (auto& p : partial)
                    for (auto& r : rs) {
                        Bits u = p;
                        u |= r;
                        next.push_back(std::move(u));
                    }
                partial = minimal(std::move(next));
            }
            if (blocked) continue;
            for (auto& y : partial) {
                bool subsumed = false;
                for (std::size_t j : byState[q])
                    if (nodes[j].set.subsetOf(y)) {
                        subsumed = true;
                        break;
                    }
                if (subsumed) continue;
                nodes.push_back({y, q, static_cast<int>(k), static_cast<int>(t + 1)});
                byState[q].push_back(nodes.size() - 1);
                if (y.subsetOf(terminal) && ctrl.finals[q]) {
                    finish(nodes.size() - 1);
                    return res;
                }
            }
        }
    }
    return res;
}

Label annotationName(const Label& x, const std::vector<int>& states) {
    std::string s = "(" + x;
    for (int q : states) s += "," + std::to_string(q);
    return s + ")";
}

std::vector<Hypergraph> choicesQ(const Hypergraph& h, const std::vector<int>& sigma, int stateCount,
                                 const AnnotationNamer& name) {
    if (sigma.size() != h.ext().size()) throw TypeMismatch("choicesQ: state sequence length differs from the type");
    std::vector<int> fixed(h.nodeCount(), -1);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        int& f = fixed[h.ext()[i]];
        if (f >= 0 && f != sigma[i]) return {};
        f = sigma[i];
    }
    std::vector<NodeId> free;
    for (NodeId v = 0; v < h.nodeCount(); ++v)
        if (fixed[v] < 0) free.push_back(v);
    std::vector<Hypergraph> out;
    std::vector<int> l = fixed;
    std::vector<int> digit(free.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < free.size(); ++i) l[free[i]] = digit[i];
        std::vector<HyperEdge> edges;
        for (auto& e : h.edges()) {
            std::vector<int> qs;
            for (NodeId v : e.att) qs.push_back(l[v]);
            edges.push_back({name(e.label, qs), e.att});
        }
        out.emplace_back(h.nodeCount(), std::move(edges), h.ext());
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == stateCount) digit[i++] = 0;
        if (i == digit.size()) break;
    }
    return out;
}

std::vector<Rule> augmentQ(const Rule& rule, int type, int stateCount, const AnnotationNamer& name) {
    std::vector<Rule> out;
    std::vector<int> sigma(type, 0);
    while (true) {
        Label lhs = name(rule.lhs, sigma);
        for (auto& h : choicesQ(rule.rhs, sigma, stateCount, name)) out.push_back({lhs, std::move(h)});
        int i = 0;
        while (i < type && ++sigma[i] == stateCount) sigma[i++] = 0;
        if (i == type) break;
    }
    return out;
}

namespace {

// Gives every nonterminal that clashes with a letter of `avoid` a fresh name.
Grammar renameApart(const Grammar& g, const std::vector<Label>& avoid) {
    FreshNames fresh(g.signature);
    for (auto& a : avoid) fresh.reserve(a);
    std::map<Label, Label> ren;
    for (auto& a : avoid)
        if (g.signature.contains(a) && !g.terminals.count(a)) ren[a] = fresh.make(a);
    if (ren.empty()) return g;
    return renameLabels(g, [&](const Label& l) {
        auto it = ren.find(l);
        return it == ren.end() ? l : it->second;
    });
}

}  // namespace

Grammar intersectRegular(const Grammar& input, const Dfa& dfaIn, IntersectionReport* report) {
    requireValid(input);
    auto note = [&](std::string s) {
        if (report) report->notices.push_back(std::move(s));
    };
    dfaIn.check();
    Dfa dfa = dfaIn;
    if (!dfa.isTotal()) {
        note("automaton was partial; completed with a sink state");
        dfa = complete(dfa);
    }
    if (input.emptyLabel) dfa = extendAlphabet(dfa, {*input.emptyLabel}, true);

    Grammar g = input;
    if (g.control) g = removeControl(g);
    if (g.tables.size() > 2) g = reduceTablesToTwo(g);
    g = renameApart(g, dfa.alphabet);
    g = synchronise(g);

    if (g.signature.typeOf(g.start) != 2)
        throw UnsupportedShape("rational intersection needs a string graph grammar (start of type 2)");
    std::set<Label> ab;  // A ∩ B
    for (auto& a : g.terminals) {
        if (dfa.letterIndex(a) < 0) continue;
        if (g.signature.typeOf(a) != 2)
            throw UnsupportedShape("rational intersection needs type-2 terminals; '" + a + "' has type " +
                                   std::to_string(g.signature.typeOf(a)));
        ab.insert(a);
    }

    const int nq = static_cast<int>(dfa.size());
    const int k = std::max(2, g.order());
    FreshNames fresh(g.signature);
    for (auto& a : dfa.alphabet) fresh.reserve(a);
    Grammar out;
    out.start = fresh.make("S");
    out.terminals = ab;
    out.emptyLabel = input.emptyLabel;
    out.epsilon = input.epsilon && dfa.acceptsEpsilon();
    std::vector<Label> fin;
    for (int i = 0; i <= k; ++i) fin.push_back(fresh.make("F" + std::to_string(i)));

    std::map<std::pair<Label, std::vector<int>>, Label> annotated;
    std::deque<std::pair<Label, std::vector<int>>> work;
    AnnotationNamer namer = [&](const Label& x, const std::vector<int>& qs) -> Label {
        auto key = std::make_pair(x, qs);
        auto it = annotated.find(key);
        if (it != annotated.end()) return it->second;
        Label name = fresh.make(annotationName(x, qs));
        annotated.emplace(key, name);
        out.signature.add(name, g.signature.typeOf(x));
        work.push_back(key);
        return name;
    };

    out.signature.add(out.start, 2);
    for (int i = 0; i <= k; ++i) out.signature.add(fin[i], i);
    for (auto& a : ab) out.signature.add(a, 2);
    auto failure = [&](const Label& x, int type) { return Rule{x, handle(fin[type], type)}; };

    std::vector<Label> seeds;
    for (int q = 0; q < nq; ++q)
        if (dfa.finals[q]) seeds.push_back(namer(g.start, {dfa.start, q}));

    // rules per original table for every annotated label, generated on demand
    std::vector<std::map<Label, std::vector<const Hypergraph*>>> byLhs(g.tables.size());
    for (std::size_t t = 0; t < g.tables.size(); ++t)
        for (auto& r : g.tables[t].rules) byLhs[t][r.lhs].push_back(&r.rhs);
    std::vector<std::vector<Rule>> augmented(g.tables.size());
    std::vector<Rule> decode;
    std::vector<Label> order;
    while (!work.empty()) {
        auto [x, qs] = work.front();
        work.pop_front();
        Label name = annotated.at({x, qs});
        order.push_back(name);
        for (std::size_t t = 0; t < g.tables.size(); ++t)
            for (auto* rhs : byLhs[t][x])
                for (auto& h : choicesQ(*rhs, qs, nq, namer)) augmented[t].push_back({name, std::move(h)});
        if (ab.count(x) && dfa.step(qs[0], x) == qs[1]) decode.push_back({name, handle(x, 2)});
    }

    auto addCovered = [&](Table& t, std::vector<Rule> rules, bool identityElse) {
        std::set<Label> covered;
        for (auto& r : rules) covered.insert(r.lhs);
        t.rules = std::move(rules);
        for (auto& [l, type] : out.signature.types()) {
            if (covered.count(l)) continue;
            bool isFinal = std::find(fin.begin(), fin.end(), l) != fin.end();
            if (identityElse || isFinal)
                t.rules.push_back({l, handle(l, type)});
            else
                t.rules.push_back(failure(l, type));
        }
    };
    std::vector<Rule> seeding;
    for (auto& s : seeds) seeding.push_back({out.start, handle(s, 2)});

    if (g.tables.size() == 1) {
        std::vector<Rule> all = std::move(augmented[0]);
        all.insert(all.end(), decode.begin(), decode.end());
        all.insert(all.end(), seeding.begin(), seeding.end());
        Table t;
        addCovered(t, std::move(all), false);
        out.tables.push_back(std::move(t));
    } else {
        Table t0;
        addCovered(t0, decode, false);
        out.tables.push_back(std::move(t0));
        for (std::size_t i = 0; i < g.tables.size(); ++i) {
            std::vector<Rule> all = std::move(augmented[i]);
            all.insert(all.end(), seeding.begin(), seeding.end());
            Table t;
            addCovered(t, std::move(all), true);
            out.tables.push_back(std::move(t));
        }
    }
    out.overhead = g.overhead.then({1, 2, 0});
    return out;
}

MembershipResult decideMembership(const Grammar& g, const Word& w) {
    MembershipResult res;
    if (w.empty()) {
        res.notice = "the empty word is never a member (string languages exclude it by definition)";
        return res;
    }
    auto alpha = letters(g);
    for (auto& a : w)
        if (!alpha.count(a)) {
            res.notice = "letter '" + a + "' is not a terminal of the grammar";
            return res;
        }
    std::vector<Label> alphabet(alpha.begin(), alpha.end());
    Grammar inter = intersectRegular(g, dfaForWord(w, alphabet));
    res.emptiness = decideEmptiness(inter);
    res.member = !res.emptiness.empty;
    return res;
}

}  // namespace phrg
