#include "phrg/et0l.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "phrg/fresh.hpp"
#include "phrg/transform.hpp"

namespace phrg {

bool Et0lGrammar::isPropagating() const {
    for (auto& t : tables)
        for (auto& r : t)
            if (r.rhs.empty()) return false;
    return true;
}

void requireValidEt0l(const Et0lGrammar& e) {
    std::set<Label> alpha(e.alphabet.begin(), e.alphabet.end());
    if (alpha.size() != e.alphabet.size()) throw ValidationError("ET0L alphabet lists a letter twice");
    if (!alpha.count(e.start)) throw ValidationError("ET0L start '" + e.start + "' is not in the alphabet");
    for (auto& a : e.terminals)
        if (!alpha.count(a)) throw ValidationError("ET0L terminal '" + a + "' is not in the alphabet");
    if (e.tables.empty()) throw ValidationError("ET0L grammar has no tables");
    for (std::size_t i = 0; i < e.tables.size(); ++i) {
        std::set<Label> covered;
        for (auto& r : e.tables[i]) {
            if (!alpha.count(r.lhs)) throw ValidationError("ET0L rule lhs '" + r.lhs + "' is not in the alphabet");
            for (auto& x : r.rhs)
                if (!alpha.count(x)) throw ValidationError("ET0L rule rhs uses unknown letter '" + x + "'");
            covered.insert(r.lhs);
        }
        for (auto& a : e.alphabet)
            if (!covered.count(a))
                throw ValidationError("ET0L table " + std::to_string(i + 1) + " has no rule for '" + a + "'");
    }
}

Et0lGrammar makePropagating(const Et0lGrammar& e) {
    requireValidEt0l(e);
    if (e.isPropagating()) return e;
    // Symbols [X,E]: X is kept and will reach a nonempty word, while the letters
    // in E were dropped earlier and must still erase under the same tables.
    using Key = std::pair<Label, std::set<Label>>;
    FreshNames fresh;
    for (auto& a : e.alphabet) fresh.reserve(a);
    std::map<Key, Label> names;
    std::deque<Key> work;
    Et0lGrammar out;
    out.terminals = e.terminals;
    out.start = e.start;
    out.tables.resize(e.tables.size());
    auto nameOf = [&](const Label& x, const std::set<Label>& obligations) -> Label {
        Key k{x, obligations};
        auto it = names.find(k);
        if (it != names.end()) return it->second;
        Label n = x;
        if (!obligations.empty()) {
            std::string hint = "[" + x + "|";
            bool first = true;
            for (auto& y : obligations) {
                hint += (first ? "" : ",") + y;
                first = false;
            }
            n = fresh.make(hint + "]");
        }
        names.emplace(k, n);
        out.alphabet.push_back(n);
        work.push_back(k);
        return n;
    };
    Label fail = fresh.make("fail");
    nameOf(e.start, {});

    std::vector<std::map<Label, std::vector<const Word*>>> rulesOf(e.tables.size());
    for (std::size_t t = 0; t < e.tables.size(); ++t)
        for (auto& r : e.tables[t]) rulesOf[t][r.lhs].push_back(&r.rhs);

    while (!work.empty()) {
        auto [x, obligations] = work.front();
        work.pop_front();
        Label lhs = names.at({x, obligations});
        for (std::size_t t = 0; t < e.tables.size(); ++t) {
            // every way the obligations can take one step
            std::set<std::set<Label>> next{{}};
            for (auto& y : obligations) {
                std::set<std::set<Label>> grown;
                for (auto& acc : next)
                    for (auto* w : rulesOf[t][y]) {
                        auto u = acc;
                        u.insert(w->begin(), w->end());
                        grown.insert(std::move(u));
                    }
                next = std::move(grown);
            }
            std::set<Word> rhsSet;
            for (auto* w : rulesOf[t][x]) {
                std::size_t n = w->size();
                if (n == 0 || n > 20) continue;
                for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                    std::set<Label> dropped;
                    for (std::size_t i = 0; i < n; ++i)
                        if (!(mask >> i & 1)) dropped.insert((*w)[i]);
                    for (auto& base : next) {
                        auto carried = base;
                        carried.insert(dropped.begin(), dropped.end());
                        Word rhs;
                        bool first = true;
                        for (std::size_t i = 0; i < n; ++i) {
                            if (!(mask >> i & 1)) continue;
                            rhs.push_back(nameOf((*w)[i], first ? carried : std::set<Label>{}));
                            first = false;
                        }
                        rhsSet.insert(std::move(rhs));
                    }
                }
            }
            if (rhsSet.empty()) rhsSet.insert(Word{fail});
            for (auto& rhs : rhsSet) out.tables[t].push_back({lhs, rhs});
        }
    }
    out.alphabet.push_back(fail);
    for (auto& t : out.tables) t.push_back({fail, Word{fail}});
    // terminals that only ever occurred in erased positions are gone
    std::erase_if(out.terminals, [&](const Label& a) {
        return std::find(out.alphabet.begin(), out.alphabet.end(), a) == out.alphabet.end();
    });
    return out;
}

Grammar importET0L(const Et0lGrammar& input) {
    Et0lGrammar e = makePropagating(input);
    Grammar g;
    for (auto& a : e.alphabet) g.signature.add(a, 2);
    g.terminals = e.terminals;
    g.start = e.start;
    for (auto& t : e.tables) {
        Table nt;
        for (auto& r : t) nt.rules.push_back({r.lhs, stringGraph(r.rhs, g.signature)});
        g.tables.push_back(std::move(nt));
    }
    g.epsilon = !input.isPropagating();  // conservative: the source may derive epsilon
    return g;
}

Et0lGrammar exportET0L(const Grammar& input) {
    requireValid(input);
    if (input.control) throw UnsupportedShape("grammar has a control automaton; remove it before exporting");
    if (input.emptyLabel) throw UnsupportedShape("grammars with an erasing label cannot be exported");
    Grammar g = eliminateUnreachable(input);
    Et0lGrammar e;
    for (auto& [l, t] : g.signature.types()) {
        if (t != 2)
            throw UnsupportedShape("label '" + l + "' has type " + std::to_string(t) + "; only type 2 exports");
        e.alphabet.push_back(l);
    }
    e.terminals = g.terminals;
    e.start = g.start;
    for (std::size_t i = 0; i < g.tables.size(); ++i) {
        std::vector<Et0lRule> rules;
        for (auto& r : g.tables[i].rules) {
            auto w = strOf(r.rhs);
            if (!w)
                throw UnsupportedShape("rule for '" + r.lhs + "' in table " + std::to_string(i + 1) +
                                       " is not a string graph");
            Et0lRule rule{r.lhs, *w};
            if (std::find(rules.begin(), rules.end(), rule) == rules.end()) rules.push_back(std::move(rule));
        }
        e.tables.push_back(std::move(rules));
    }
    return e;
}

std::set<Word> et0lInterpret(const Et0lGrammar& e, std::size_t maxLen, std::size_t maxFormLen) {
    requireValidEt0l(e);
    bool propagating = e.isPropagating();
    if (maxFormLen == 0) maxFormLen = propagating ? maxLen : 2 * maxLen + 2;
    std::vector<std::map<Label, std::vector<const Word*>>> rulesOf(e.tables.size());
    for (std::size_t t = 0; t < e.tables.size(); ++t)
        for (auto& r : e.tables[t]) rulesOf[t][r.lhs].push_back(&r.rhs);
    auto terminal = [&](const Word& w) {
        return std::all_of(w.begin(), w.end(), [&](const Label& a) { return e.terminals.count(a) != 0; });
    };
    std::set<Word> out;
    std::set<Word> seen{{e.start}};
    std::deque<Word> work{{e.start}};
    if (terminal({e.start}) && 1 <= maxLen) out.insert({e.start});
    while (!work.empty()) {
        Word w = std::move(work.front());
        work.pop_front();
        for (auto& rt : rulesOf) {
            // suffix lower bound on the output length for pruning
            std::vector<std::size_t> rest(w.size() + 1, 0);
            for (std::size_t i = w.size(); i-- > 0;) {
                std::size_t m = SIZE_MAX;
                for (auto* r : rt[w[i]]) m = std::min(m, r->size());
                rest[i] = rest[i + 1] + m;
            }
            if (rest[0] > maxFormLen) continue;
            std::set<Word> partial{{}};
            for (std::size_t i = 0; i < w.size() && !partial.empty(); ++i) {
                std::set<Word> next;
                for (auto& p : partial)
                    for (auto* r : rt[w[i]]) {
                        if (p.size() + r->size() + rest[i + 1] > maxFormLen) continue;
                        Word q = p;
                        q.insert(q.end(), r->begin(), r->end());
                        next.insert(std::move(q));
                    }
                partial = std::move(next);
            }
            for (auto& s : partial) {
                if (!seen.insert(s).second) continue;
                if (terminal(s) && s.size() <= maxLen) out.insert(s);
                work.push_back(s);
            }
        }
    }
    return out;
}

}  // namespace phrg
