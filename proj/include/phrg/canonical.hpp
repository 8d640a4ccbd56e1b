#pragma once

#include <string>

#include "phrg/hypergraph.hpp"

namespace phrg {

struct Canonical {
    std::string key;   // equal keys <=> isomorphic (ext reflecting)
    Hypergraph graph;  // representative with nodes and edges in canonical order
};

Canonical canonicalize(const Hypergraph& h);
std::string canonicalForm(const Hypergraph& h);
bool isIsomorphic(const Hypergraph& g, const Hypergraph& h);

}  // namespace phrg
