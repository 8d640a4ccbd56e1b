#pragma once

#include <set>
#include <vector>

#include "phrg/grammar.hpp"

namespace phrg {

struct Et0lRule {
    Label lhs;
    Word rhs;

    bool operator==(const Et0lRule&) const = default;
};

struct Et0lGrammar {
    std::vector<Label> alphabet;
    std::set<Label> terminals;
    Label start;
    std::vector<std::vector<Et0lRule>> tables;

    bool isPropagating() const;
    bool operator==(const Et0lGrammar&) const = default;
};

void requireValidEt0l(const Et0lGrammar& e);

// Same table count, no epsilon right-hand sides, language minus epsilon.
Et0lGrammar makePropagating(const Et0lGrammar& e);
Grammar importET0L(const Et0lGrammar& e);
// Throws UnsupportedShape when some reachable rhs is not a string graph.
Et0lGrammar exportET0L(const Grammar& g);

// Words of length <= maxLen. Sentential forms longer than maxFormLen are
// dropped (0 picks maxLen for propagating grammars, 2*maxLen+2 otherwise).
std::set<Word> et0lInterpret(const Et0lGrammar& e, std::size_t maxLen, std::size_t maxFormLen = 0);

}  // namespace phrg
