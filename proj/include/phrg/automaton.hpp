#pragma once

#include <set>
#include <string>
#include <vector>

#include "phrg/hypergraph.hpp"

namespace phrg {

// Deterministic automaton. delta[q][i] is the successor on alphabet[i];
// -1 marks a missing transition (partial automaton).
struct Dfa {
    std::vector<std::string> states;
    std::vector<Label> alphabet;
    std::vector<std::vector<int>> delta;
    int start = 0;
    std::vector<bool> finals;

    std::size_t size() const { return states.size(); }
    int letterIndex(const Label& a) const;
    int step(int q, const Label& a) const;  // -1 if undefined
    bool accepts(const Word& w) const;
    bool isTotal() const;
    bool acceptsEpsilon() const { return finals.at(start); }
    void check() const;  // structural sanity, throws ValidationError

    bool operator==(const Dfa&) const = default;
};

// Nondeterministic automaton with epsilon moves.
struct Nfa {
    std::vector<std::string> states;
    std::vector<Label> alphabet;
    std::vector<std::vector<std::set<int>>> delta;  // [state][letter]
    std::vector<std::set<int>> epsilon;
    std::set<int> starts;
    std::vector<bool> finals;

    int addState(std::string name, bool final = false);
    int letterIndex(const Label& a) const;
    void addTransition(int from, const Label& a, int to);
    void addEpsilon(int from, int to);
    bool accepts(const Word& w) const;
};

Nfa toNfa(const Dfa& d);

// Subset construction plus a sink; the result is total over nfa.alphabet.
Dfa determinizeComplete(const Nfa& nfa);
// Adds a sink for missing transitions; already total automata come back unchanged.
Dfa complete(const Dfa& d);

// Chain automaton for {w} plus a sink.
Dfa dfaForWord(const Word& w, std::vector<Label> alphabet);
Dfa dfaForWords(const std::set<Word>& words, std::vector<Label> alphabet);
Dfa dfaUniversal(std::vector<Label> alphabet);
Dfa dfaEmptyLanguage(std::vector<Label> alphabet);

// Adds letters to the alphabet. Self-loop letters leave the state unchanged
// (used to read the erasing label as epsilon); other new letters go to a sink.
Dfa extendAlphabet(const Dfa& d, const std::vector<Label>& letters, bool selfLoop);

// Every state reachable from the start and able to reach a final state.
std::vector<bool> usefulStates(const Dfa& d);

}  // namespace phrg
