#include "phrg/morphism.hpp"

#include <algorithm>
#include <map>

namespace phrg {

bool isScatteredSubsequence(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::size_t i = 0;
    for (std::size_t j = 0; j < b.size() && i < a.size(); ++j)
        if (a[i] == b[j]) ++i;
    return i == a.size();
}

std::optional<std::string> morphismViolation(const Hypergraph& g, const Hypergraph& h, const Morphism& m) {
    if (m.nodeMap.size() != g.nodeCount()) return "node map has wrong size";
    if (m.edgeMap.size() != g.edgeCount()) return "edge map has wrong size";
    for (NodeId v : m.nodeMap)
        if (v >= h.nodeCount()) return "node map leaves the target";
    for (EdgeId e = 0; e < g.edgeCount(); ++e) {
        EdgeId f = m.edgeMap[e];
        if (f >= h.edgeCount()) return "edge map leaves the target";
        if (g.edge(e).label != h.edge(f).label) return "label not preserved on edge " + std::to_string(e);
        auto& ga = g.edge(e).att;
        auto& ha = h.edge(f).att;
        if (ga.size() != ha.size()) return "arity mismatch on edge " + std::to_string(e);
        for (std::size_t i = 0; i < ga.size(); ++i)
            if (m.nodeMap[ga[i]] != ha[i]) return "attachment not preserved on edge " + std::to_string(e);
    }
    std::vector<NodeId> mappedExt;
    for (NodeId v : g.ext()) mappedExt.push_back(m.nodeMap[v]);
    if (m.externalMode == ExternalMode::Reflecting) {
        if (mappedExt != h.ext()) return "external nodes not reflected";
    } else if (!isScatteredSubsequence(mappedExt, h.ext())) {
        return "mapped external nodes are not a subsequence of the target's";
    }
    auto injective = [](auto v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    bool needNodes = m.mode == MorphismMode::Injective || m.mode == MorphismMode::Isomorphism;
    bool needEdges = needNodes || m.mode == MorphismMode::HyperedgeInjective;
    if (needNodes && !injective(m.nodeMap)) return "node map not injective";
    if (needEdges && !injective(m.edgeMap)) return "edge map not injective";
    if (m.mode == MorphismMode::Isomorphism &&
        (g.nodeCount() != h.nodeCount() || g.edgeCount() != h.edgeCount()))
        return "not bijective";
    return std::nullopt;
}

namespace {

constexpr NodeId kUnset = static_cast<NodeId>(-1);

struct Search {
    const Hypergraph& g;
    const Hypergraph& h;
    MorphismMode mode;
    ExternalMode extMode;
    bool injNodes;
    bool injEdges;
    std::vector<NodeId> nodeMap;
    std::vector<EdgeId> edgeMap;
    std::vector<bool> edgeDone;
    std::vector<int> nodeUse;  // how many g-nodes map onto each h-node
    std::vector<bool> edgeUsed;
    std::vector<NodeId> looseNodes;  // g-nodes touched by no edge

    Search(const Hypergraph& g_, const Hypergraph& h_, MorphismMode m, ExternalMode x)
        : g(g_), h(h_), mode(m), extMode(x) {
        injNodes = m == MorphismMode::Injective || m == MorphismMode::Isomorphism;
        injEdges = injNodes || m == MorphismMode::HyperedgeInjective;
        nodeMap.assign(g.nodeCount(), kUnset);
        edgeMap.assign(g.edgeCount(), 0);
        edgeDone.assign(g.edgeCount(), false);
        nodeUse.assign(h.nodeCount(), 0);
        edgeUsed.assign(h.edgeCount(), false);
        std::vector<bool> touched(g.nodeCount(), false);
        for (auto& e : g.edges())
            for (NodeId v : e.att) touched[v] = true;
        for (NodeId v = 0; v < g.nodeCount(); ++v)
            if (!touched[v]) looseNodes.push_back(v);
    }

    bool canMapNode(NodeId v, NodeId w) const {
        if (nodeMap[v] != kUnset) return nodeMap[v] == w;
        return !injNodes || nodeUse[w] == 0;
    }

    // Candidate target edges for g-edge e under the current partial map.
    bool compatible(EdgeId e, EdgeId f) const {
        if (injEdges && edgeUsed[f]) return false;
        auto& ge = g.edge(e);
        auto& he = h.edge(f);
        if (ge.label != he.label || ge.att.size() != he.att.size()) return false;
        // positions repeated in g must be repeated in h; injective maps also forbid the converse
        for (std::size_t i = 0; i < ge.att.size(); ++i) {
            if (!canMapNode(ge.att[i], he.att[i])) return false;
            for (std::size_t j = i + 1; j < ge.att.size(); ++j) {
                if (ge.att[i] == ge.att[j] && he.att[i] != he.att[j]) return false;
                if (injNodes && ge.att[i] != ge.att[j] && he.att[i] == he.att[j]) return false;
            }
        }
        return true;
    }

    std::vector<NodeId> assign(EdgeId e, EdgeId f) {
        std::vector<NodeId> fresh;
        auto& ge = g.edge(e);
        auto& he = h.edge(f);
        for (std::size_t i = 0; i < ge.att.size(); ++i) {
            NodeId v = ge.att[i];
            if (nodeMap[v] == kUnset) {
                nodeMap[v] = he.att[i];
                ++nodeUse[he.att[i]];
                fresh.push_back(v);
            }
        }
        edgeMap[e] = f;
        edgeDone[e] = true;
        edgeUsed[f] = true;
        return fresh;
    }

    void unassign(EdgeId e, EdgeId f, const std::vector<NodeId>& fresh) {
        for (NodeId v : fresh) {
            --nodeUse[nodeMap[v]];
            nodeMap[v] = kUnset;
        }
        edgeDone[e] = false;
        edgeUsed[f] = false;
    }

    bool extOk() const {
        std::vector<NodeId> mapped;
        for (NodeId v : g.ext()) mapped.push_back(nodeMap[v]);
        if (extMode == ExternalMode::Reflecting) return mapped == h.ext();
        return isScatteredSubsequence(mapped, h.ext());
    }

    bool mapLoose(std::size_t i) {
        if (i == looseNodes.size()) return extOk();
        NodeId v = looseNodes[i];
        if (nodeMap[v] != kUnset) return mapLoose(i + 1);  // pinned through ext
        for (NodeId w = 0; w < h.nodeCount(); ++w) {
            if (!canMapNode(v, w)) continue;
            nodeMap[v] = w;
            ++nodeUse[w];
            if (mapLoose(i + 1)) return true;
            --nodeUse[w];
            nodeMap[v] = kUnset;
        }
        return false;
    }

    bool run(std::size_t done) {
        if (done == g.edgeCount()) return mapLoose(0);
        // pick the unmapped edge with the fewest candidates
        EdgeId best = 0;
        std::vector<EdgeId> bestCands;
        bool found = false;
        for (EdgeId e = 0; e < g.edgeCount(); ++e) {
            if (edgeDone[e]) continue;
            std::vector<EdgeId> cands;
            for (EdgeId f = 0; f < h.edgeCount(); ++f)
                if (compatible(e, f)) cands.push_back(f);
            if (!found || cands.size() < bestCands.size()) {
                best = e;
                bestCands = std::move(cands);
                found = true;
                if (bestCands.empty()) return false;
            }
        }
        for (EdgeId f : bestCands) {
            auto fresh = assign(best, f);
            if (run(done + 1)) return true;
            unassign(best, f, fresh);
        }
        return false;
    }
};

}  // namespace

std::optional<Morphism> findMorphism(const Hypergraph& g, const Hypergraph& h, MorphismMode mode,
                                     ExternalMode ext) {
    if (mode == MorphismMode::Isomorphism) {
        if (g.nodeCount() != h.nodeCount() || g.edgeCount() != h.edgeCount()) return std::nullopt;
        std::map<Label, int> count;
        for (auto& e : g.edges()) ++count[e.label];
        for (auto& e : h.edges()) --count[e.label];
        for (auto& [l, c] : count)
            if (c != 0) return std::nullopt;
    }
    Search s(g, h, mode, ext);
    if (ext == ExternalMode::Reflecting) {
        if (g.ext().size() != h.ext().size()) return std::nullopt;
        for (std::size_t i = 0; i < g.ext().size(); ++i) {
            NodeId v = g.ext()[i], w = h.ext()[i];
            if (!s.canMapNode(v, w)) return std::nullopt;
            if (s.nodeMap[v] == kUnset) {
                s.nodeMap[v] = w;
                ++s.nodeUse[w];
            }
        }
    }
    if (!s.run(0)) return std::nullopt;
    Morphism m;
    m.nodeMap = s.nodeMap;
    m.edgeMap = s.edgeMap;
    m.mode = mode;
    m.externalMode = ext;
    return m;
}

}  // namespace phrg
