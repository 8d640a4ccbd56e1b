#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "phrg/grammar.hpp"

namespace phrg {

struct HrGrammar {
    Signature signature;
    std::set<Label> nonterminals;
    Label start;
    std::vector<Rule> rules;

    int order() const;
    std::set<Label> terminals() const;
    bool operator==(const HrGrammar&) const = default;
};

void requireValidHr(const HrGrammar& hr);

// Sequential hyperedge replacement, bounded like enumerateLanguage.
struct HrEnumeration {
    GraphSet graphs;
    bool truncated = false;
};
HrEnumeration enumerateHrLanguage(const HrGrammar& hr, const Bounds& bounds);
// Single-edge HR steps from h.
GraphSet hrSuccessors(const HrGrammar& hr, const Hypergraph& h);

// One table: the HR rules plus an identity rule for every label.
Grammar importHR(const HrGrammar& hr);
// Recognises the shape produced by importHR.
std::optional<HrGrammar> asHR(const Grammar& g);

Grammar properize(const Grammar& g);
Grammar eliminateUnreachable(const Grammar& g);
Grammar reduceTablesToTwo(const Grammar& g);
Grammar removeControl(const Grammar& g);
Grammar synchronise(const Grammar& g);
HrGrammar embedHR(const Grammar& g);

using FiniteSubstitution = std::map<Label, std::vector<Hypergraph>>;
using GrammarSubstitution = std::map<Label, Grammar>;

struct HypergraphSubstitution {
    std::map<Label, std::variant<std::vector<Hypergraph>, Grammar>> images;
    // X^• is an image of X in addition to images[X]. Iteration handles this
    // by letting X stay put, which avoids a pass through the image grammar.
    std::set<Label> keepSelf;

    // X^• is among the images of X for every X in the domain (only decidable
    // for finite images; grammar images report false).
    bool isNested() const;
};

Grammar substituteFinite(const Grammar& g, const FiniteSubstitution& s);
Grammar substituteGrammars(const Grammar& g, const GrammarSubstitution& s);
// Dispatches to substituteFinite when every image is finite and g has one table.
Grammar substitute(const Grammar& g, const HypergraphSubstitution& s);
Grammar iterateSubstitutions(const Grammar& g, const std::vector<HypergraphSubstitution>& subs);

// Grammar generating exactly the given graphs (single table, synchronised).
Grammar finiteGrammar(const std::vector<Hypergraph>& graphs, const Signature& sig, int type);

Grammar renameLabels(const Grammar& g, const std::function<Label(const Label&)>& f);

// Named transformation used by the CLI: properize, unreachable, tables2,
// nocontrol, sync. Throws UnsupportedShape for unknown names.
Grammar applyTransform(const std::string& name, const Grammar& g);

}  // namespace phrg
