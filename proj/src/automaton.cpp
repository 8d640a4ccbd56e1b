#include "phrg/automaton.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace phrg {

int Dfa::letterIndex(const Label& a) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), a);
    return it == alphabet.end() ? -1 : static_cast<int>(it - alphabet.begin());
}

int Dfa::step(int q, const Label& a) const {
    int i = letterIndex(a);
    if (i < 0 || q < 0) return -1;
    return delta[q][i];
}

bool Dfa::accepts(const Word& w) const {
    int q = start;
    for (auto& a : w) {
        q = step(q, a);
        if (q < 0) return false;
    }
    return finals[q];
}

bool Dfa::isTotal() const {
    for (auto& row : delta)
        for (int t : row)
            if (t < 0) return false;
    return true;
}

void Dfa::check() const {
    if (states.empty()) throw ValidationError("automaton has no states");
    if (start < 0 || start >= static_cast<int>(states.size())) throw ValidationError("automaton start state out of range");
    if (finals.size() != states.size() || delta.size() != states.size())
        throw ValidationError("automaton tables do not match its state count");
    for (auto& row : delta) {
        if (row.size() != alphabet.size()) throw ValidationError("automaton transition row has wrong width");
        for (int t : row)
            if (t < -1 || t >= static_cast<int>(states.size()))
                throw ValidationError("automaton transition target out of range");
    }
    std::set<Label> seen(alphabet.begin(), alphabet.end());
    if (seen.size() != alphabet.size()) throw ValidationError("automaton alphabet has duplicate letters");
}

int Nfa::addState(std::string name, bool final) {
    states.push_back(std::move(name));
    delta.emplace_back(alphabet.size());
    epsilon.emplace_back();
    finals.push_back(final);
    return static_cast<int>(states.size() - 1);
}

int Nfa::letterIndex(const Label& a) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), a);
    return it == alphabet.end() ? -1 : static_cast<int>(it - alphabet.begin());
}

void Nfa::addTransition(int from, const Label& a, int to) {
    int i = letterIndex(a);
    if (i < 0) {
        alphabet.push_back(a);
        for (auto& row : delta) row.emplace_back();
        i = static_cast<int>(alphabet.size() - 1);
    }
    delta[from][i].insert(to);
}

void Nfa::addEpsilon(int from, int to) { epsilon[from].insert(to); }

static std::set<int> closure(const Nfa& n, std::set<int> s) {
    std::vector<int> work(s.begin(), s.end());
    while (!work.empty()) {
        int q = work.back();
        work.pop_back();
        for (int r : n.epsilon[q])
            if (s.insert(r).second) work.push_back(r);
    }
    return s;
}

bool Nfa::accepts(const Word& w) const {
    auto cur = closure(*this, starts);
    for (auto& a : w) {
        int i = letterIndex(a);
        if (i < 0) return false;
        std::set<int> next;
        for (int q : cur) next.insert(delta[q][i].begin(), delta[q][i].end());
        cur = closure(*this, next);
    }
    return std::any_of(cur.begin(), cur.end(), [&](int q) { return finals[q]; });
}

Nfa toNfa(const Dfa& d) {
    Nfa n;
    n.alphabet = d.alphabet;
    for (std::size_t q = 0; q < d.size(); ++q) n.addState(d.states[q], d.finals[q]);
    for (std::size_t q = 0; q < d.size(); ++q)
        for (std::size_t i = 0; i < d.alphabet.size(); ++i)
            if (d.delta[q][i] >= 0) n.delta[q][i].insert(d.delta[q][i]);
    n.starts = {d.start};
    return n;
}

Dfa determinizeComplete(const Nfa& nfa) {
    Dfa d;
    d.alphabet = nfa.alphabet;
    std::map<std::set<int>, int> index;
    std::vector<std::set<int>> subsets;
    auto intern = [&](const std::set<int>& s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(subsets.size());
        index.emplace(s, id);
        subsets.push_back(s);
        std::string name = "{";
        bool first = true;
        for (int q : s) {
            if (!first) name += ",";
            name += nfa.states[q];
            first = false;
        }
        name += "}";
        d.states.push_back(name);
        d.finals.push_back(std::any_of(s.begin(), s.end(), [&](int q) { return nfa.finals[q]; }));
        d.delta.emplace_back(d.alphabet.size(), -1);
        return id;
    };
    d.start = intern(closure(nfa, nfa.starts));
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        for (std::size_t i = 0; i < d.alphabet.size(); ++i) {
            std::set<int> next;
            for (int q : subsets[k]) next.insert(nfa.delta[q][i].begin(), nfa.delta[q][i].end());
            int t = intern(closure(nfa, next));  // the empty subset is the sink
            d.delta[k][i] = t;
        }
    }
    return d;
}

Dfa complete(const Dfa& d) {
    d.check();
    if (d.isTotal()) return d;
    Dfa out = d;
    int sink = static_cast<int>(out.states.size());
    std::string name = "sink";
    while (std::find(out.states.begin(), out.states.end(), name) != out.states.end()) name += "'";
    out.states.push_back(name);
    out.finals.push_back(false);
    out.delta.emplace_back(out.alphabet.size(), sink);
    for (auto& row : out.delta)
        for (int& t : row)
            if (t < 0) t = sink;
    return out;
}

Dfa dfaForWord(const Word& w, std::vector<Label> alphabet) {
    for (auto& a : w)
        if (std::find(alphabet.begin(), alphabet.end(), a) == alphabet.end()) alphabet.push_back(a);
    Dfa d;
    d.alphabet = alphabet;
    std::size_t n = w.size();
    for (std::size_t i = 0; i <= n; ++i) {
        d.states.push_back("q" + std::to_string(i));
        d.finals.push_back(i == n);
    }
    d.states.push_back("sink");
    d.finals.push_back(false);
    int sink = static_cast<int>(n + 1);
    d.delta.assign(n + 2, std::vector<int>(alphabet.size(), sink));
    for (std::size_t i = 0; i < n; ++i) d.delta[i][d.letterIndex(w[i])] = static_cast<int>(i + 1);
    d.start = 0;
    return d;
}

Dfa dfaForWords(const std::set<Word>& words, std::vector<Label> alphabet) {
    Nfa n;
    n.alphabet = alphabet;
    int root = n.addState("r");
    n.starts = {root};
    for (auto& w : words) {
        int q = root;
        for (auto& a : w) {
            int r = n.addState("s" + std::to_string(n.states.size()));
            n.addTransition(q, a, r);
            q = r;
        }
        n.finals[q] = true;
    }
    return determinizeComplete(n);
}

Dfa dfaUniversal(std::vector<Label> alphabet) {
    Dfa d;
    d.alphabet = std::move(alphabet);
    d.states = {"all"};
    d.finals = {true};
    d.delta = {std::vector<int>(d.alphabet.size(), 0)};
    return d;
}

Dfa dfaEmptyLanguage(std::vector<Label> alphabet) {
    Dfa d = dfaUniversal(std::move(alphabet));
    d.states = {"none"};
    d.finals = {false};
    return d;
}

Dfa extendAlphabet(const Dfa& d, const std::vector<Label>& letters, bool selfLoop) {
    Dfa out = complete(d);
    std::vector<Label> added;
    for (auto& a : letters)
        if (out.letterIndex(a) < 0 && std::find(added.begin(), added.end(), a) == added.end()) added.push_back(a);
    if (added.empty()) return out;
    int sink = -1;
    if (!selfLoop) {
        sink = static_cast<int>(out.states.size());
        std::string name = "sink";
        while (std::find(out.states.begin(), out.states.end(), name) != out.states.end()) name += "'";
        out.states.push_back(name);
        out.finals.push_back(false);
        out.delta.emplace_back(out.alphabet.size(), sink);
    }
    for (auto& a : added) {
        out.alphabet.push_back(a);
        for (std::size_t q = 0; q < out.delta.size(); ++q)
            out.delta[q].push_back(selfLoop ? static_cast<int>(q) : sink);
    }
    return out;
}

std::vector<bool> usefulStates(const Dfa& d) {
    std::size_t n = d.size();
    std::vector<bool> reach(n, false), coreach(n, false);
    std::queue<int> q;
    reach[d.start] = true;
    q.push(d.start);
    while (!q.empty()) {
        int s = q.front();
        q.pop();
        for (int t : d.delta[s])
            if (t >= 0 && !reach[t]) {
                reach[t] = true;
                q.push(t);
            }
    }
    for (std::size_t s = 0; s < n; ++s)
        if (d.finals[s]) coreach[s] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (coreach[s]) continue;
            for (int t : d.delta[s])
                if (t >= 0 && coreach[t]) {
                    coreach[s] = true;
                    changed = true;
                    break;
                }
        }
    }
    std::vector<bool> out(n);
    for (std::size_t s = 0; s < n; ++s) out[s] = reach[s] && coreach[s];
    return out;
}

}  // namespace phrg
