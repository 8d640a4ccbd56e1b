#pragma once

#include <map>
#include <set>
#include <variant>

#include "phrg/automaton.hpp"
#include "phrg/grammar.hpp"
#include "phrg/transform.hpp"

namespace phrg {

// Right-linear order-2 HR grammar for L(dfa) minus epsilon.
HrGrammar regularToHR(const Dfa& dfa);
// Single-table grammar for a finite word set (epsilon dropped).
Grammar wordsGrammar(const std::set<Word>& words);

struct StringBounds {
    std::size_t maxLen = 12;
    int maxSteps = 8;
    std::size_t maxEdges = 0;  // 0: maxLen plus the grammar's edge slack
    std::size_t maxResults = 10000;
};

struct StringLanguage {
    std::set<Word> words;
    bool truncated = false;
    bool sawNonString = false;  // a terminal graph that is no string graph
    bool sawEpsilon = false;    // the 0-edge string graph (or only erased letters)
};

StringLanguage stringLanguage(const Grammar& g, const StringBounds& bounds);
std::set<Label> letters(const Grammar& g);  // terminals other than the erasing label

Grammar unionL(const Grammar& g1, const Grammar& g2);
Grammar concatL(const Grammar& g1, const Grammar& g2);
Grammar plusL(const Grammar& g);

using StringImage = std::variant<std::set<Word>, Grammar>;
using StringSubstitution = std::map<Label, StringImage>;

Grammar applyStringSubstitution(const Grammar& g, const StringSubstitution& h);
Grammar applyHomomorphism(const Grammar& g, const std::map<Label, Word>& phi);
// Every image has length at most one.
Grammar applyWeakCoding(const Grammar& g, const std::map<Label, Word>& phi);
// phi maps the new alphabet B into words over g's letters.
Grammar inverseHomomorphism(const Grammar& g, const std::map<Label, Word>& phi);
Grammar freeProductWP(const Grammar& g1, const Grammar& g2);

}  // namespace phrg
