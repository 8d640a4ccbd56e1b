#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "phrg/automaton.hpp"
#include "phrg/grammar.hpp"

namespace phrg {

using LabelSet = std::set<Label>;

LabelSet labelsOf(const Hypergraph& h);
// H(X): disjoint union of the untyped handles of X's members, ext dropped.
Hypergraph labelSetGraph(const LabelSet& x, const Signature& sig);

std::set<LabelSet> labelSetSuccessors(const LabelSet& x, const Table& table);
// Label sets reachable from {S} in one or more steps over any table.
std::set<LabelSet> reachableLabelSets(const Grammar& g);

struct EmptinessResult {
    bool empty = true;
    // label sets from {S} to a terminal-only set, with the table index taken
    // into each one (0 for the first entry)
    std::vector<std::pair<LabelSet, int>> witness;
    std::size_t explored = 0;
};

EmptinessResult decideEmptiness(const Grammar& g);
inline bool isEmpty(const Grammar& g) { return decideEmptiness(g).empty; }

using AnnotationNamer = std::function<Label(const Label&, const std::vector<int>&)>;
// "(X,q1,...,qt)"
Label annotationName(const Label& x, const std::vector<int>& states);

// Every encoding of h under a state labelling l with l o ext = sigma.
std::vector<Hypergraph> choicesQ(const Hypergraph& h, const std::vector<int>& sigma, int stateCount,
                                 const AnnotationNamer& name = annotationName);
// All ((L, sigma), H) for sigma in Q^type(L) and H in choicesQ(R, sigma).
std::vector<Rule> augmentQ(const Rule& rule, int type, int stateCount, const AnnotationNamer& name = annotationName);

struct IntersectionReport {
    std::vector<std::string> notices;
};
Grammar intersectRegular(const Grammar& g, const Dfa& dfa, IntersectionReport* report = nullptr);

struct MembershipResult {
    bool member = false;
    std::string notice;
    EmptinessResult emptiness;
};
MembershipResult decideMembership(const Grammar& g, const Word& w);
inline bool isMember(const Grammar& g, const Word& w) { return decideMembership(g, w).member; }

}  // namespace phrg
