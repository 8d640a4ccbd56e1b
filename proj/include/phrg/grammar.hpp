#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "phrg/automaton.hpp"
#include "phrg/hypergraph.hpp"

namespace phrg {

struct Rule {
    Label lhs;
    Hypergraph rhs;

    bool operator==(const Rule&) const = default;
};

struct Table {
    std::vector<Rule> rules;

    bool operator==(const Table&) const = default;
};

// Table indices in traces are 1-based.
using Trace = std::vector<int>;

// How many extra derivation steps / edges a construction needs to simulate one
// of its input's derivations. Used to configure bounded equivalence checks:
// input steps s correspond to at most s * stepFactor + stepOffset output steps.
struct Overhead {
    int stepFactor = 1;
    int stepOffset = 0;
    int edgeSlack = 0;

    bool operator==(const Overhead&) const = default;
    Overhead then(const Overhead& next) const;
};

struct Grammar {
    Signature signature;
    std::set<Label> terminals;
    Label start;
    std::vector<Table> tables;
    std::optional<Dfa> control;  // alphabet "1".."l"

    // String-language metadata.
    std::optional<Label> emptyLabel;  // terminal read as epsilon by strOf
    bool epsilon = false;             // the intended string language also contains epsilon

    Overhead overhead;

    int order() const;
    std::size_t tableCount() const { return tables.size(); }
    bool isTerminalGraph(const Hypergraph& h) const;
    std::set<Label> nonterminals() const;

    bool operator==(const Grammar&) const = default;
};

enum class Policy { Strict, Repair };

struct TableReport {
    int index = 0;
    std::vector<Label> missing;  // labels without a rule
    bool repetitionFree = true;
    bool proper = true;
    bool wellFormed = true;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> errors;
    std::vector<std::string> notices;
    int order = 0;
    std::size_t tableCount = 0;
    std::vector<TableReport> tables;
    bool synchronised = false;
    std::map<int, Label> finalSymbols;
};

ValidationReport validate(const Grammar& g, Policy policy = Policy::Strict);
// Adds identity rules (X, X^•) wherever a table lacks a rule for X.
Grammar repairTotality(const Grammar& g);
// Throws ValidationError listing the problems.
void requireValid(const Grammar& g);

// Canonical key -> canonical representative; iteration order is the output order.
using GraphSet = std::map<std::string, Hypergraph>;

void insertCanonical(GraphSet& set, const Hypergraph& h);

GraphSet directSuccessors(const Hypergraph& h, const Table& table);
GraphSet derive(const Hypergraph& h, const Trace& trace, const Grammar& g);

struct Bounds {
    int maxSteps = 8;
    std::size_t maxEdges = 32;
    std::size_t maxResults = 10000;
    // Nonzero: also bound the edges not labelled with the empty label.
    std::size_t maxLetters = 0;
};

struct EnumerationOptions {
    // Skip graphs that cannot reach a terminal graph within maxEdges (dead
    // labels, or too many edges that each must yield at least some terminals).
    // Does not change the emitted set.
    bool pruneDead = true;
    bool recordTraces = false;
    // One-table grammars without control are built per label instead of by
    // search over sentential forms (same result, no traces).
    bool bottomUp = true;
};

struct Enumeration {
    GraphSet graphs;
    std::map<std::string, Trace> traces;  // one witness trace per emitted key
    bool hitSteps = false;
    bool hitEdges = false;
    bool hitResults = false;
    std::size_t explored = 0;
    bool truncated() const { return hitSteps || hitEdges || hitResults; }
};

Enumeration enumerateLanguage(const Grammar& g, const Bounds& bounds, const EnumerationOptions& opts = {});

// Labels X for which {X} can reach a terminal label set in the fixpoint sense.
std::set<Label> productiveLabels(const Grammar& g);

// Y such that every rule for x in every table has rhs ≅ Y^•.
std::optional<Label> finalTarget(const Grammar& g, const Label& x);
struct SyncCertificate {
    bool ok = false;
    std::map<int, Label> finals;  // type -> final symbol
    std::string reason;
};
SyncCertificate synchronisationCertificate(const Grammar& g);
inline bool isSynchronisedSyntactically(const Grammar& g) { return synchronisationCertificate(g).ok; }

// Control automaton over table indices, made deterministic and total.
Dfa controlAutomaton(const Grammar& g);
std::string tableLetter(int index);

}  // namespace phrg
