#include "phrg/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace phrg {

namespace {

using Code = std::vector<int>;

struct Component {
    std::vector<NodeId> nodes;  // global ids
    std::vector<EdgeId> edges;
};

// Edge-labelled structure of one connected component, local node ids.
struct Local {
    int n = 0;
    std::vector<std::vector<int>> extPos;
    struct E {
        int label;
        std::vector<int> att;
    };
    std::vector<E> edges;
    std::vector<std::vector<std::pair<int, int>>> inc;  // (edge, position)
};

// Renumber arbitrary keys into 0..k-1 preserving their order.
template <class Key>
std::vector<int> rankBy(const std::vector<Key>& keys, int* distinct) {
    std::vector<int> idx(keys.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    std::vector<int> out(keys.size());
    int r = -1;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i == 0 || keys[idx[i - 1]] < keys[idx[i]]) ++r;
        out[idx[i]] = r;
    }
    *distinct = r + 1;
    return out;
}

class ComponentSearch {
public:
    explicit ComponentSearch(const Local& g) : g_(g) {}

    void run() {
        std::vector<std::vector<int>> init(g_.n);
        for (int v = 0; v < g_.n; ++v) init[v] = g_.extPos[v];
        int k;
        std::vector<int> colors = rankBy(init, &k);
        std::vector<int> prefix;
        search(colors, k, prefix);
    }

    const Code& bestCode() const { return best_; }
    const std::vector<int>& bestPos() const { return bestPos_; }  // local node -> canonical position

private:
    const Local& g_;
    Code best_;
    std::vector<int> bestPos_;
    bool haveBest_ = false;
    std::vector<std::vector<int>> autos_;

    int refine(std::vector<int>& colors, int k) const {
        while (true) {
            std::vector<std::vector<int>> sig(g_.n);
            for (int v = 0; v < g_.n; ++v) {
                std::vector<std::vector<int>> parts;
                for (auto [e, pos] : g_.inc[v]) {
                    std::vector<int> t{g_.edges[e].label, pos};
                    for (int u : g_.edges[e].att) t.push_back(colors[u]);
                    parts.push_back(std::move(t));
                }
                std::sort(parts.begin(), parts.end());
                auto& s = sig[v];
                s.push_back(colors[v]);
                for (auto& p : parts) {
                    s.push_back(static_cast<int>(p.size()));
                    s.insert(s.end(), p.begin(), p.end());
                }
            }
            int k2;
            colors = rankBy(sig, &k2);
            if (k2 == k) return k;
            k = k2;
        }
    }

    Code leafCode(const std::vector<int>& pos) const {
        Code code{g_.n};
        std::vector<int> at(g_.n);
        for (int v = 0; v < g_.n; ++v) at[pos[v]] = v;
        for (int p = 0; p < g_.n; ++p) {
            auto& ep = g_.extPos[at[p]];
            code.push_back(static_cast<int>(ep.size()));
            code.insert(code.end(), ep.begin(), ep.end());
        }
        std::vector<std::vector<int>> es;
        for (auto& e : g_.edges) {
            std::vector<int> t{e.label, static_cast<int>(e.att.size())};
            for (int u : e.att) t.push_back(pos[u]);
            es.push_back(std::move(t));
        }
        std::sort(es.begin(), es.end());
        code.push_back(static_cast<int>(es.size()));
        for (auto& t : es) code.insert(code.end(), t.begin(), t.end());
        return code;
    }

    bool sameOrbit(int u, int v, const std::vector<int>& prefix) const {
        std::vector<int> parent(g_.n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto& gamma : autos_) {
            bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](int p) { return gamma[p] == p; });
            if (!fixes) continue;
            for (int x = 0; x < g_.n; ++x) {
                int a = find(x), b = find(gamma[x]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
        return find(u) == find(v);
    }

    void search(std::vector<int> colors, int k, std::vector<int>& prefix) {
        k = refine(colors, k);
        if (k == g_.n) {
            Code code = leafCode(colors);
            if (!haveBest_ || code < best_) {
                best_ = std::move(code);
                bestPos_ = colors;
                haveBest_ = true;
            } else if (code == best_) {
                // leaf order differs from the best one by an automorphism
                std::vector<int> bestAt(g_.n);
                for (int v = 0; v < g_.n; ++v) bestAt[bestPos_[v]] = v;
                std::vector<int> gamma(g_.n);
                for (int v = 0; v < g_.n; ++v) gamma[v] = bestAt[colors[v]];
                autos_.push_back(std::move(gamma));
            }
            return;
        }
        std::vector<int> size(k, 0);
        for (int c : colors) ++size[c];
        int target = 0;
        while (size[target] < 2) ++target;
        std::vector<int> explored;
        for (int v = 0; v < g_.n; ++v) {
            if (colors[v] != target) continue;
            bool skip = false;
            for (int u : explored)
                if (sameOrbit(u, v, prefix)) {
                    skip = true;
                    break;
                }
            if (skip) continue;
            explored.push_back(v);
            std::vector<int> split(g_.n);
            for (int u = 0; u < g_.n; ++u) split[u] = 2 * colors[u] + (u == v ? 0 : 1);
            int k2;
            auto next = rankBy(split, &k2);
            prefix.push_back(v);
            search(std::move(next), k2, prefix);
            prefix.pop_back();
        }
    }
};

void appendKeyLabel(std::string& out, const Label& l) {
    out += std::to_string(l.size());
    out += ':';
    out += l;
}

}  // namespace

Canonical canonicalize(const Hypergraph& h) {
    std::vector<Label> labels;
    for (auto& e : h.edges()) labels.push_back(e.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    auto rankOf = [&](const Label& l) {
        return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
    };

    // connected components; nullary edges stand alone
    std::vector<NodeId> parent(h.nodeCount());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& e : h.edges())
        for (std::size_t i = 1; i < e.att.size(); ++i) {
            NodeId a = find(e.att[0]), b = find(e.att[i]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::map<NodeId, Component> byRoot;
    std::vector<Component> comps;
    for (NodeId v = 0; v < h.nodeCount(); ++v) byRoot[find(v)].nodes.push_back(v);
    for (EdgeId e = 0; e < h.edgeCount(); ++e) {
        if (h.edge(e).att.empty())
            comps.push_back({{}, {e}});
        else
            byRoot[find(h.edge(e).att[0])].edges.push_back(e);
    }
    for (auto& [r, c] : byRoot) comps.push_back(std::move(c));

    std::vector<std::vector<int>> extPos(h.nodeCount());
    for (std::size_t i = 0; i < h.ext().size(); ++i) extPos[h.ext()[i]].push_back(static_cast<int>(i));

    struct Done {
        Code code;
        std::vector<NodeId> order;  // global node ids in canonical order
        std::vector<std::vector<int>> edges;  // (rank, arity, local positions...)
    };
    std::vector<Done> done;
    std::vector<int> localId(h.nodeCount(), -1);
    for (auto& c : comps) {
        Local g;
        g.n = static_cast<int>(c.nodes.size());
        for (int i = 0; i < g.n; ++i) localId[c.nodes[i]] = i;
        g.extPos.resize(g.n);
        g.inc.resize(g.n);
        for (int i = 0; i < g.n; ++i) g.extPos[i] = extPos[c.nodes[i]];
        for (EdgeId e : c.edges) {
            Local::E le{rankOf(h.edge(e).label), {}};
            for (NodeId v : h.edge(e).att) le.att.push_back(localId[v]);
            int idx = static_cast<int>(g.edges.size());
            for (int p = 0; p < static_cast<int>(le.att.size()); ++p) g.inc[le.att[p]].push_back({idx, p});
            g.edges.push_back(std::move(le));
        }
        ComponentSearch s(g);
        s.run();
        Done d;
        d.code = s.bestCode();
        auto& pos = s.bestPos();
        d.order.resize(g.n);
        for (int i = 0; i < g.n; ++i) d.order[pos[i]] = c.nodes[i];
        for (auto& le : g.edges) {
            std::vector<int> t{le.label, static_cast<int>(le.att.size())};
            for (int u : le.att) t.push_back(pos[u]);
            d.edges.push_back(std::move(t));
        }
        std::sort(d.edges.begin(), d.edges.end());
        done.push_back(std::move(d));
    }
    std::sort(done.begin(), done.end(), [](const Done& a, const Done& b) { return a.code < b.code; });

    std::vector<NodeId> newId(h.nodeCount());
    std::vector<HyperEdge> edges;
    NodeId next = 0;
    for (auto& d : done) {
        NodeId base = next;
        for (NodeId v : d.order) newId[v] = next++;
        for (auto& t : d.edges) {
            HyperEdge e{labels[t[0]], {}};
            for (std::size_t i = 2; i < t.size(); ++i) e.att.push_back(base + t[i]);
            edges.push_back(std::move(e));
        }
    }
    std::vector<NodeId> ext;
    for (NodeId v : h.ext()) ext.push_back(newId[v]);

    Canonical out{{}, Hypergraph(h.nodeCount(), std::move(edges), std::move(ext))};
    std::string& key = out.key;
    key += std::to_string(out.graph.nodeCount());
    key += '|';
    for (std::size_t i = 0; i < out.graph.ext().size(); ++i) {
        if (i) key += ',';
        key += std::to_string(out.graph.ext()[i]);
    }
    key += '|';
    for (auto& e : out.graph.edges()) {
        appendKeyLabel(key, e.label);
        key += '(';
        for (std::size_t i = 0; i < e.att.size(); ++i) {
            if (i) key += ',';
            key += std::to_string(e.att[i]);
        }
        key += ')';
    }
    return out;
}

std::string canonicalForm(const Hypergraph& h) { return canonicalize(h).key; }

bool isIsomorphic(const Hypergraph& g, const Hypergraph& h) {
    if (g.nodeCount() != h.nodeCount() || g.edgeCount() != h.edgeCount() || g.ext().size() != h.ext().size())
        return false;
    return canonicalForm(g) == canonicalForm(h);
}

}  // namespace phrg
