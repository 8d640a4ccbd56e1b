#include "phrg/hypergraph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace phrg {

Signature::Signature(std::map<Label, int> types) : types_(std::move(types)) {
    for (auto& [l, t] : types_)
        if (t < 0) throw TypeMismatch("negative type for label '" + l + "'");
}

void Signature::add(const Label& label, int type) {
    if (type < 0) throw TypeMismatch("negative type for label '" + label + "'");
    auto it = types_.find(label);
    if (it != types_.end()) {
        if (it->second != type)
            throw TypeMismatch("label '" + label + "' redeclared with type " +
                               std::to_string(type) + " (was " + std::to_string(it->second) + ")");
        return;
    }
    types_.emplace(label, type);
}

void Signature::remove(const Label& label) { types_.erase(label); }

int Signature::typeOf(const Label& label) const {
    auto it = types_.find(label);
    if (it == types_.end()) throw UnknownLabel(label);
    return it->second;
}

int Signature::maxType() const {
    int k = 0;
    for (auto& [l, t] : types_) k = std::max(k, t);
    return k;
}

std::vector<Label> Signature::labels() const {
    std::vector<Label> out;
    out.reserve(types_.size());
    for (auto& [l, t] : types_) out.push_back(l);
    return out;
}

Hypergraph::Hypergraph(std::size_t nodes, std::vector<HyperEdge> edges, std::vector<NodeId> ext)
    : nodes_(nodes), edges_(std::move(edges)), ext_(std::move(ext)) {
    for (auto& e : edges_)
        for (NodeId v : e.att)
            if (v >= nodes_) throw Error("edge '" + e.label + "' attached to missing node " + std::to_string(v));
    for (NodeId v : ext_)
        if (v >= nodes_) throw Error("external node " + std::to_string(v) + " does not exist");
}

NodeId Hypergraph::addNode() { return static_cast<NodeId>(nodes_++); }

EdgeId Hypergraph::addEdge(Label label, std::vector<NodeId> att) {
    for (NodeId v : att)
        if (v >= nodes_) throw Error("edge '" + label + "' attached to missing node " + std::to_string(v));
    edges_.push_back({std::move(label), std::move(att)});
    return static_cast<EdgeId>(edges_.size() - 1);
}

void Hypergraph::setExt(std::vector<NodeId> ext) {
    for (NodeId v : ext)
        if (v >= nodes_) throw Error("external node " + std::to_string(v) + " does not exist");
    ext_ = std::move(ext);
}

static bool hasRepeat(std::vector<NodeId> seq) {
    std::sort(seq.begin(), seq.end());
    return std::adjacent_find(seq.begin(), seq.end()) != seq.end();
}

bool Hypergraph::isRepetitionFree() const { return !hasRepeat(ext_); }

bool Hypergraph::isProper() const {
    for (auto& e : edges_)
        if (hasRepeat(e.att)) return false;
    return true;
}

bool Hypergraph::isExternal(NodeId v) const {
    return std::find(ext_.begin(), ext_.end(), v) != ext_.end();
}

std::set<Label> Hypergraph::labels() const {
    std::set<Label> out;
    for (auto& e : edges_) out.insert(e.label);
    return out;
}

Hypergraph handle(const Label& label, int type) {
    if (type < 0) throw TypeMismatch("negative type for label '" + label + "'");
    std::vector<NodeId> nodes(type);
    std::iota(nodes.begin(), nodes.end(), 0);
    return Hypergraph(type, {{label, nodes}}, nodes);
}

Hypergraph handle(const Label& label, const Signature& sig) { return handle(label, sig.typeOf(label)); }

Hypergraph stringGraph(const Word& word) {
    std::vector<HyperEdge> edges;
    for (std::size_t i = 0; i < word.size(); ++i)
        edges.push_back({word[i], {NodeId(i), NodeId(i + 1)}});
    return Hypergraph(word.size() + 1, std::move(edges), {0, NodeId(word.size())});
}

Hypergraph stringGraph(const Word& word, const Signature& sig) {
    for (auto& a : word)
        if (sig.typeOf(a) != 2) throw TypeMismatch("letter '" + a + "' is not of type 2");
    return stringGraph(word);
}

std::optional<Word> strOf(const Hypergraph& h, const std::optional<Label>& emptyLabel) {
    if (h.ext().size() != 2) return std::nullopt;
    std::size_t n = h.edgeCount();
    if (h.nodeCount() != n + 1) return std::nullopt;
    if (n == 0) {
        if (h.ext()[0] != h.ext()[1]) return std::nullopt;
        return Word{};
    }
    std::vector<int> out(h.nodeCount(), -1);
    std::vector<int> indeg(h.nodeCount(), 0);
    for (EdgeId e = 0; e < n; ++e) {
        auto& att = h.edge(e).att;
        if (att.size() != 2 || att[0] == att[1]) return std::nullopt;
        if (out[att[0]] != -1) return std::nullopt;
        out[att[0]] = static_cast<int>(e);
        if (++indeg[att[1]] > 1) return std::nullopt;
    }
    NodeId v = h.ext()[0];
    if (indeg[v] != 0) return std::nullopt;
    Word w;
    for (std::size_t step = 0; step < n; ++step) {
        if (out[v] < 0) return std::nullopt;
        auto& e = h.edge(out[v]);
        if (!emptyLabel || e.label != *emptyLabel) w.push_back(e.label);
        v = e.att[1];
    }
    if (v != h.ext()[1] || out[v] != -1) return std::nullopt;
    return w;
}

namespace {

struct UnionFind {
    std::vector<NodeId> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    NodeId find(NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

}  // namespace

Hypergraph replace(const Hypergraph& h, const std::map<EdgeId, Hypergraph>& sigma) {
    std::size_t total = h.nodeCount();
    std::vector<std::size_t> offset;
    for (auto& [e, r] : sigma) {
        if (e >= h.edgeCount()) throw Error("replace: unknown edge id " + std::to_string(e));
        if (static_cast<std::size_t>(r.type()) != h.edge(e).att.size())
            throw TypeMismatch("replace: edge " + std::to_string(e) + " ('" + h.edge(e).label + "') has type " +
                               std::to_string(h.edge(e).att.size()) + " but replacement has type " +
                               std::to_string(r.type()));
        offset.push_back(total);
        total += r.nodeCount();
    }
    UnionFind uf(total);
    std::size_t k = 0;
    for (auto& [e, r] : sigma) {
        auto& att = h.edge(e).att;
        for (std::size_t i = 0; i < att.size(); ++i) uf.unite(att[i], NodeId(offset[k] + r.ext()[i]));
        ++k;
    }
    // representatives are the smallest ids of their class; number them densely in order
    std::vector<NodeId> dense(total, 0);
    NodeId next = 0;
    for (NodeId v = 0; v < total; ++v)
        if (uf.find(v) == v) dense[v] = next++;
    auto mapNode = [&](NodeId v) { return dense[uf.find(v)]; };

    std::vector<HyperEdge> edges;
    for (EdgeId e = 0; e < h.edgeCount(); ++e) {
        if (sigma.count(e)) continue;
        HyperEdge ne{h.edge(e).label, {}};
        for (NodeId v : h.edge(e).att) ne.att.push_back(mapNode(v));
        edges.push_back(std::move(ne));
    }
    k = 0;
    for (auto& [e, r] : sigma) {
        for (auto& re : r.edges()) {
            HyperEdge ne{re.label, {}};
            for (NodeId v : re.att) ne.att.push_back(mapNode(NodeId(offset[k] + v)));
            edges.push_back(std::move(ne));
        }
        ++k;
    }
    std::vector<NodeId> ext;
    for (NodeId v : h.ext()) ext.push_back(mapNode(v));
    return Hypergraph(next, std::move(edges), std::move(ext));
}

Hypergraph replaceAll(const Hypergraph& h, const std::vector<const Hypergraph*>& rhs) {
    if (rhs.size() != h.edgeCount()) throw Error("replaceAll: need one replacement per edge");
    std::size_t total = h.nodeCount();
    std::vector<std::size_t> offset(rhs.size());
    for (std::size_t e = 0; e < rhs.size(); ++e) {
        if (static_cast<std::size_t>(rhs[e]->type()) != h.edge(e).att.size())
            throw TypeMismatch("replaceAll: edge " + std::to_string(e) + " ('" + h.edge(e).label +
                               "') and its replacement differ in type");
        offset[e] = total;
        total += rhs[e]->nodeCount();
    }
    UnionFind uf(total);
    for (std::size_t e = 0; e < rhs.size(); ++e) {
        auto& att = h.edge(e).att;
        for (std::size_t i = 0; i < att.size(); ++i) uf.unite(att[i], NodeId(offset[e] + rhs[e]->ext()[i]));
    }
    std::vector<NodeId> dense(total, 0);
    NodeId next = 0;
    for (NodeId v = 0; v < total; ++v)
        if (uf.find(v) == v) dense[v] = next++;
    std::vector<HyperEdge> edges;
    for (std::size_t e = 0; e < rhs.size(); ++e)
        for (auto& re : rhs[e]->edges()) {
            HyperEdge ne{re.label, {}};
            ne.att.reserve(re.att.size());
            for (NodeId v : re.att) ne.att.push_back(dense[uf.find(NodeId(offset[e] + v))]);
            edges.push_back(std::move(ne));
        }
    std::vector<NodeId> ext;
    for (NodeId v : h.ext()) ext.push_back(dense[uf.find(v)]);
    return Hypergraph(next, std::move(edges), std::move(ext));
}

Hypergraph disjointUnion(const Hypergraph& g, const Hypergraph& h, ExtPolicy policy) {
    std::vector<HyperEdge> edges = g.edges();
    NodeId off = static_cast<NodeId>(g.nodeCount());
    for (auto& e : h.edges()) {
        HyperEdge ne{e.label, e.att};
        for (auto& v : ne.att) v += off;
        edges.push_back(std::move(ne));
    }
    std::vector<NodeId> ext;
    if (policy == ExtPolicy::Concatenate) {
        ext = g.ext();
        for (NodeId v : h.ext()) ext.push_back(v + off);
    }
    return Hypergraph(g.nodeCount() + h.nodeCount(), std::move(edges), std::move(ext));
}

Hypergraph relabel(const Hypergraph& h, const std::function<Label(const Label&)>& f) {
    std::vector<HyperEdge> edges = h.edges();
    for (auto& e : edges) e.label = f(e.label);
    return Hypergraph(h.nodeCount(), std::move(edges), h.ext());
}

Hypergraph withoutExt(Hypergraph h) {
    h.setExt({});
    return h;
}

void checkTyping(const Hypergraph& h, const Signature& sig) {
    for (auto& e : h.edges()) {
        int t = sig.typeOf(e.label);
        if (static_cast<std::size_t>(t) != e.att.size())
            throw TypeMismatch("edge labelled '" + e.label + "' has " + std::to_string(e.att.size()) +
                               " attachments but the label has type " + std::to_string(t));
    }
}

bool isTyped(const Hypergraph& h, const Signature& sig) {
    try {
        checkTyping(h, sig);
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::size_t edgesWithLabel(const Hypergraph& h, const Label& label) {
    return std::count_if(h.edges().begin(), h.edges().end(), [&](auto& e) { return e.label == label; });
}

std::string wordToString(const Word& w) {
    bool single = std::all_of(w.begin(), w.end(), [](const Label& a) { return a.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!single && i) out += ' ';
        out += w[i];
    }
    return out;
}

Word parseWord(const std::string& text) {
    Word w;
    if (text.find_first_of(" ,\t") != std::string::npos) {
        std::string tok;
        for (char c : text) {
            if (c == ' ' || c == ',' || c == '\t') {
                if (!tok.empty()) w.push_back(tok);
                tok.clear();
            } else {
                tok += c;
            }
        }
        if (!tok.empty()) w.push_back(tok);
        return w;
    }
    // one letter per UTF-8 code point
    for (std::size_t i = 0; i < text.size();) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : 4;
        w.push_back(text.substr(i, len));
        i += len;
    }
    return w;
}

}  // namespace phrg
