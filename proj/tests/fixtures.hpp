#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "phrg/et0l.hpp"
#include "phrg/grammar.hpp"
#include "phrg/strings.hpp"
#include "phrg/transform.hpp"

namespace fx {

using namespace phrg;

Grammar makeGrammar(const std::map<Label, int>& types, const std::set<Label>& terminals, const Label& start,
                     const std::vector<std::vector<Rule>>& tables);

// □ of type 0 doubling every step: edge counts 2^n.
Grammar pow2Box();
// Same grammar with control accepting exactly the traces 1 and 11.
Grammar pow2BoxControlled();
// String grammar a -> aa: STR language {a^(2^n) | n >= 0}.
Grammar pow2String();

// Full binary trees (eight rules, one table).
Grammar fbt();
// The 6-edge tree of the positive example derivation.
Hypergraph fbtDepth2();
// Sierpinski triangles (six rules, one table).
Grammar sierpinski();
// Tree skeleton over {X, Y} and the substitution X, Y -> □ that yields FBT.
Grammar fbtCore();
FiniteSubstitution fbtCoreToBox();

// Context-free string grammars as HR grammars.
HrGrammar anbnHR();                                        // a^n b^n, n >= 1
HrGrammar dyckHR();                                        // S -> aSb | ab | SS
HrGrammar balancedHR(const Label& x, const Label& xInv);   // nonempty words with #x = #xInv
HrGrammar regularHR();                                     // (ab)^n c, as a right-linear HR grammar
Grammar anbn();
Grammar dyck();

// ET0L fixtures.
Et0lGrammar et0lPow2();      // a -> aa
Et0lGrammar et0lAbc();       // two tables, a^n b^n c^n
Et0lGrammar et0lDyck();      // S -> aSb | ab | SS
Et0lGrammar et0lErasing();   // non-propagating, two tables
Et0lGrammar et0lFib();       // D0L a -> b, b -> ab
std::vector<std::pair<std::string, Et0lGrammar>> et0lSuite();

// Three tables over strings: {a,b}* c.
Grammar threeTables();
// Two tables with control (12)*: pairs of letters.
Grammar controlledString();

// Emptiness suite: names paired with the expected verdict.
Grammar deadLoop();       // S -> S only
Grammar deadTrap();       // terminals always decay into a self-perpetuating F
Grammar deadControl();    // the only terminating table is never allowed
Grammar deadDesync();     // two halves need different tables at the same step
Grammar deadNoRule();     // the start can only reach unproductive labels
struct EmptinessCase {
    std::string name;
    Grammar g;
    bool empty;
};
std::vector<EmptinessCase> emptinessSuite();

// Named grammars written to fixtures/*.json.
std::vector<std::pair<std::string, Grammar>> namedGrammars();

// All words over the alphabet with length in [1, maxLen].
std::vector<Word> allWords(const std::vector<Label>& alphabet, std::size_t maxLen);

}  // namespace fx
