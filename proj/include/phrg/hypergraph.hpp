#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "phrg/error.hpp"

namespace phrg {

using Label = std::string;
using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Word = std::vector<Label>;

class Signature {
public:
    Signature() = default;
    explicit Signature(std::map<Label, int> types);

    // Adding an existing label with the same type is a no-op.
    void add(const Label& label, int type);
    void remove(const Label& label);
    bool contains(const Label& label) const { return types_.count(label) != 0; }
    int typeOf(const Label& label) const;
    std::size_t size() const { return types_.size(); }
    int maxType() const;
    std::vector<Label> labels() const;
    const std::map<Label, int>& types() const { return types_; }

    bool operator==(const Signature&) const = default;

private:
    std::map<Label, int> types_;
};

struct HyperEdge {
    Label label;
    std::vector<NodeId> att;

    bool operator==(const HyperEdge&) const = default;
};

// Nodes are 0..nodeCount()-1, edges are indices into edges().
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(std::size_t nodes, std::vector<HyperEdge> edges, std::vector<NodeId> ext);

    std::size_t nodeCount() const { return nodes_; }
    std::size_t edgeCount() const { return edges_.size(); }
    const std::vector<HyperEdge>& edges() const { return edges_; }
    const HyperEdge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<NodeId>& ext() const { return ext_; }
    int type() const { return static_cast<int>(ext_.size()); }

    NodeId addNode();
    EdgeId addEdge(Label label, std::vector<NodeId> att);
    void setExt(std::vector<NodeId> ext);
    void setLabel(EdgeId e, Label label) { edges_.at(e).label = std::move(label); }

    bool isRepetitionFree() const;
    bool isProper() const;
    bool isWellFormed() const { return isRepetitionFree() && isProper(); }
    bool isExternal(NodeId v) const;

    std::set<Label> labels() const;

    // Structural equality (same ids); use isIsomorphic for the real thing.
    bool operator==(const Hypergraph&) const = default;

private:
    std::size_t nodes_ = 0;
    std::vector<HyperEdge> edges_;
    std::vector<NodeId> ext_;
};

Hypergraph handle(const Label& label, int type);
Hypergraph handle(const Label& label, const Signature& sig);

// Chain v0 -w1-> v1 ... -wn-> vn with ext (v0, vn).
Hypergraph stringGraph(const Word& word);
Hypergraph stringGraph(const Word& word, const Signature& sig);

// Partial inverse of stringGraph. Edges labelled emptyLabel are read as ε.
std::optional<Word> strOf(const Hypergraph& h, const std::optional<Label>& emptyLabel = {});

// H[e1/R1, ..., en/Rn]; sigma keys are edge ids of h.
Hypergraph replace(const Hypergraph& h, const std::map<EdgeId, Hypergraph>& sigma);

// Parallel step: every edge i replaced by *rhs[i].
Hypergraph replaceAll(const Hypergraph& h, const std::vector<const Hypergraph*>& rhs);

enum class ExtPolicy { Concatenate, Drop };

Hypergraph disjointUnion(const Hypergraph& g, const Hypergraph& h,
                         ExtPolicy policy = ExtPolicy::Concatenate);

Hypergraph relabel(const Hypergraph& h, const std::function<Label(const Label&)>& f);

// Same graph with ext replaced by the empty sequence.
Hypergraph withoutExt(Hypergraph h);

// Throws TypeMismatch / UnknownLabel when h is not a hypergraph over sig.
void checkTyping(const Hypergraph& h, const Signature& sig);
bool isTyped(const Hypergraph& h, const Signature& sig);

std::size_t edgesWithLabel(const Hypergraph& h, const Label& label);

// Word helpers. Letters are labels; a word prints as concatenation when every
// letter is a single character and space separated otherwise.
std::string wordToString(const Word& w);
Word parseWord(const std::string& text);

}  // namespace phrg
