#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phrg/hypergraph.hpp"

namespace phrg {

enum class MorphismMode { General, Injective, HyperedgeInjective, Isomorphism };
enum class ExternalMode { Subsequence, Reflecting };

struct Morphism {
    std::vector<NodeId> nodeMap;
    std::vector<EdgeId> edgeMap;
    MorphismMode mode = MorphismMode::General;
    ExternalMode externalMode = ExternalMode::Subsequence;
};

// Backtracking search, most constrained edge first.
std::optional<Morphism> findMorphism(const Hypergraph& g, const Hypergraph& h, MorphismMode mode,
                                     ExternalMode ext = ExternalMode::Subsequence);

// Checks every condition of m's mode; returns an explanation on failure.
std::optional<std::string> morphismViolation(const Hypergraph& g, const Hypergraph& h, const Morphism& m);
inline bool isMorphism(const Hypergraph& g, const Hypergraph& h, const Morphism& m) {
    return !morphismViolation(g, h, m).has_value();
}

// True iff a is a scattered subsequence of b.
bool isScatteredSubsequence(const std::vector<NodeId>& a, const std::vector<NodeId>& b);

}  // namespace phrg
