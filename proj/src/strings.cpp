#include "phrg/strings.hpp"

#include <algorithm>

#include "phrg/canonical.hpp"
#include "phrg/decide.hpp"
#include "phrg/fresh.hpp"

namespace phrg {

HrGrammar regularToHR(const Dfa& dfa) {
    dfa.check();
    HrGrammar hr;
    FreshNames fresh;
    for (auto& a : dfa.alphabet) {
        fresh.reserve(a);
        hr.signature.add(a, 2);
    }
    std::vector<bool> useful = usefulStates(dfa);
    std::vector<Label> state(dfa.size());
    for (std::size_t q = 0; q < dfa.size(); ++q) {
        state[q] = fresh.make("Q" + dfa.states[q]);
        hr.signature.add(state[q], 2);
        hr.nonterminals.insert(state[q]);
    }
    hr.start = state[dfa.start];
    for (std::size_t q = 0; q < dfa.size(); ++q) {
        if (!useful[q]) continue;
        for (std::size_t i = 0; i < dfa.alphabet.size(); ++i) {
            int r = dfa.delta[q][i];
            if (r < 0 || !useful[r]) continue;
            const Label& a = dfa.alphabet[i];
            hr.rules.push_back({state[q], stringGraph({a, state[r]}, hr.signature)});
            if (dfa.finals[r]) hr.rules.push_back({state[q], stringGraph({a}, hr.signature)});
        }
    }
    return hr;
}

Grammar wordsGrammar(const std::set<Word>& words) {
    Signature sig;
    std::vector<Hypergraph> graphs;
    for (auto& w : words)
        for (auto& a : w) sig.add(a, 2);
    for (auto& w : words)
        if (!w.empty()) graphs.push_back(stringGraph(w, sig));
    Grammar g = finiteGrammar(graphs, sig, 2);
    g.epsilon = words.count(Word{}) != 0;
    return g;
}

std::set<Label> letters(const Grammar& g) {
    std::set<Label> out = g.terminals;
    if (g.emptyLabel) out.erase(*g.emptyLabel);
    return out;
}

StringLanguage stringLanguage(const Grammar& g, const StringBounds& bounds) {
    Bounds b;
    b.maxSteps = bounds.maxSteps;
    b.maxResults = bounds.maxResults;
    b.maxLetters = bounds.maxLen;
    std::size_t slack = static_cast<std::size_t>(std::max(0, g.overhead.edgeSlack));
    b.maxEdges = bounds.maxEdges ? bounds.maxEdges
                                 : (g.emptyLabel ? 2 * bounds.maxLen + 2 : bounds.maxLen) + slack;
    auto en = enumerateLanguage(g, b);
    StringLanguage out;
    out.truncated = en.truncated();
    for (auto& [key, h] : en.graphs) {
        auto w = strOf(h, g.emptyLabel);
        if (!w) {
            out.sawNonString = true;
            continue;
        }
        if (w->empty()) {
            out.sawEpsilon = true;
            continue;
        }
        if (w->size() <= bounds.maxLen) out.words.insert(*w);
    }
    return out;
}

namespace {

// Renames every erasing label to one shared name so the images agree on it.
std::optional<Label> unifyEmpty(std::vector<Grammar>& gs) {
    auto first = std::find_if(gs.begin(), gs.end(), [](const Grammar& g) { return g.emptyLabel.has_value(); });
    if (first == gs.end()) return std::nullopt;
    Label e = *first->emptyLabel;
    bool reusable = std::all_of(gs.begin(), gs.end(),
                                [&](const Grammar& g) { return !g.signature.contains(e) || g.emptyLabel == e; });
    if (!reusable) {
        FreshNames fresh;
        for (auto& g : gs) fresh.reserve(g.signature);
        e = fresh.make("empty");
    }
    for (auto& g : gs) {
        if (!g.emptyLabel || *g.emptyLabel == e) continue;
        Label old = *g.emptyLabel;
        g = renameLabels(g, [&](const Label& l) { return l == old ? e : l; });
    }
    return e;
}

void requireString(const Grammar& g) {
    requireValid(g);
    if (g.signature.typeOf(g.start) != 2) throw TypeMismatch("expected a string grammar (start of type 2)");
}

// Substitutes the grammars into the string graphs of a regular carrier.
Grammar viaCarrier(const Dfa& carrier, std::vector<Grammar> images, bool epsilon) {
    auto e = unifyEmpty(images);
    GrammarSubstitution s;
    for (std::size_t i = 0; i < images.size(); ++i) s[carrier.alphabet[i]] = std::move(images[i]);
    Grammar out = substituteGrammars(importHR(regularToHR(carrier)), s);
    out.emptyLabel = e;
    if (e && !out.signature.contains(*e)) out.emptyLabel.reset();
    out.epsilon = epsilon;
    return out;
}

std::vector<Label> carrierLetters(const std::vector<const Grammar*>& gs, std::size_t n) {
    FreshNames fresh;
    for (auto* g : gs) fresh.reserve(g->signature);
    std::vector<Label> out;
    const char* hints[] = {"X", "Y", "Z"};
    for (std::size_t i = 0; i < n; ++i) out.push_back(fresh.make(hints[i % 3]));
    return out;
}

}  // namespace

Grammar unionL(const Grammar& g1, const Grammar& g2) {
    requireString(g1);
    requireString(g2);
    auto xy = carrierLetters({&g1, &g2}, 2);
    Dfa k = dfaForWords({{xy[0]}, {xy[1]}}, xy);
    return viaCarrier(k, {g1, g2}, g1.epsilon || g2.epsilon);
}

Grammar concatL(const Grammar& g1, const Grammar& g2) {
    requireString(g1);
    requireString(g2);
    auto xy = carrierLetters({&g1, &g2}, 2);
    std::set<Word> words{{xy[0], xy[1]}};
    if (g2.epsilon) words.insert({xy[0]});
    if (g1.epsilon) words.insert({xy[1]});
    return viaCarrier(dfaForWords(words, xy), {g1, g2}, g1.epsilon && g2.epsilon);
}

Grammar plusL(const Grammar& g) {
    requireString(g);
    auto x = carrierLetters({&g}, 1);
    Dfa k;
    k.states = {"0", "1"};
    k.alphabet = x;
    k.delta = {{1}, {1}};
    k.start = 0;
    k.finals = {false, true};
    return viaCarrier(k, {g}, g.epsilon);
}

namespace {

// A letter-to-letter (or letter-to-empty) map applied by renaming terminals.
// Only possible when the merged terminals behave alike in every table.
std::optional<Grammar> relabelTerminals(const Grammar& g, const std::map<Label, Label>& f) {
    FreshNames fresh(g.signature);
    std::set<Label> targets;
    for (auto& [a, b] : f) {
        targets.insert(b);
        fresh.reserve(b);
    }
    std::map<Label, Label> name;
    for (auto& [l, t] : g.signature.types()) {
        if (auto it = f.find(l); it != f.end())
            name[l] = it->second;
        else if (g.terminals.count(l) || !targets.count(l))
            name[l] = l;
        else
            name[l] = fresh.make(l);
    }
    for (auto& a : g.terminals)
        if (!f.count(a) && targets.count(a)) return std::nullopt;  // would merge with an unmapped letter
    Grammar out = renameLabels(g, [&](const Label& l) { return name.at(l); });
    for (std::size_t t = 0; t < out.tables.size(); ++t) {
        std::map<Label, std::map<Label, std::set<std::string>>> behaviour;  // target -> source -> rhs keys
        for (auto& r : g.tables[t].rules) {
            auto it = f.find(r.lhs);
            if (it == f.end()) continue;
            behaviour[it->second][r.lhs].insert(canonicalize(relabel(r.rhs, [&](const Label& l) { return name.at(l); })).key);
        }
        for (auto& [b, bySource] : behaviour) {
            std::size_t sources = 0;
            for (auto& [a, c] : f) sources += c == b;
            if (bySource.size() != sources && !bySource.empty()) return std::nullopt;
            for (auto& [a, keys] : bySource)
                if (keys != bySource.begin()->second) return std::nullopt;
        }
        std::vector<Rule> rules;
        std::set<std::pair<Label, std::string>> seen;
        for (auto& r : out.tables[t].rules)
            if (seen.insert({r.lhs, canonicalize(r.rhs).key}).second) rules.push_back(r);
        out.tables[t].rules = std::move(rules);
    }
    return out;
}

Grammar substituteStrings(const Grammar& g, const StringSubstitution& h, bool computeEpsilon) {
    requireString(g);
    auto alpha = letters(g);
    bool erasing = false;
    std::vector<Grammar> grammarImages;
    for (auto& [a, img] : h) {
        if (!alpha.count(a)) throw UnknownLabel(a);
        if (auto* ws = std::get_if<std::set<Word>>(&img)) {
            if (ws->count(Word{})) erasing = true;
        } else {
            auto& gi = std::get<Grammar>(img);
            requireString(gi);
            if (gi.epsilon || gi.emptyLabel) erasing = true;
        }
    }
    FreshNames fresh(g.signature);
    for (auto& [a, img] : h)
        if (auto* gi = std::get_if<Grammar>(&img)) fresh.reserve(gi->signature);
    std::optional<Label> e = g.emptyLabel;
    if (erasing && !e) e = fresh.make("empty");
    auto renameEmpty = [&](Grammar gi) {
        if (gi.emptyLabel && e && *gi.emptyLabel != *e) {
            Label old = *gi.emptyLabel;
            gi = renameLabels(gi, [&](const Label& l) { return l == old ? *e : l; });
        }
        return gi;
    };

    std::set<Label> erasable;
    std::optional<Grammar> coded;
    std::map<Label, Label> coding;
    for (auto& [a, img] : h) {
        auto* ws = std::get_if<std::set<Word>>(&img);
        if (!ws || ws->size() != 1 || ws->begin()->size() > 1) break;
        coding[a] = ws->begin()->empty() ? *e : ws->begin()->front();
    }
    if (coding.size() == h.size() && !g.control) coded = relabelTerminals(g, coding);
    if (coded) {
        for (auto& [a, b] : coding)
            if (e && b == *e) erasable.insert(a);
    }

    HypergraphSubstitution s;
    for (auto& [a, img] : h) {
        if (coded) break;
        if (auto* ws = std::get_if<std::set<Word>>(&img)) {
            Signature sig;
            for (auto& w : *ws)
                for (auto& x : w) sig.add(x, 2);
            std::vector<Hypergraph> graphs;
            for (auto& w : *ws) {
                if (w.empty()) {
                    graphs.push_back(handle(*e, 2));
                    erasable.insert(a);
                } else {
                    graphs.push_back(stringGraph(w, sig));
                }
            }
            s.images[a] = std::move(graphs);
        } else {
            Grammar gi = renameEmpty(std::get<Grammar>(img));
            if (gi.epsilon) {
                erasable.insert(a);
                std::set<Word> justE{{*e}};
                Grammar eg = wordsGrammar(justE);
                eg.emptyLabel = *e;
                gi = unionL(gi, eg);
                gi.epsilon = false;
            }
            s.images[a] = std::move(gi);
        }
    }
    Grammar out = coded ? *coded : substitute(g, s);
    if (e && out.signature.contains(*e) && out.terminals.count(*e)) out.emptyLabel = e;
    out.epsilon = g.epsilon;
    if (computeEpsilon && !out.epsilon && !erasable.empty()) {
        // epsilon is in the image iff some word of L consists of erasable letters only
        std::vector<Label> alphabet(alpha.begin(), alpha.end());
        Dfa d;
        d.states = {"in", "out"};
        d.alphabet = alphabet;
        d.start = 0;
        d.finals = {true, false};
        d.delta.assign(2, std::vector<int>(alphabet.size(), 1));
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            if (erasable.count(alphabet[i])) d.delta[0][i] = 0;
        out.epsilon = !isEmpty(intersectRegular(g, d));
    }
    return out;
}

}  // namespace

Grammar applyStringSubstitution(const Grammar& g, const StringSubstitution& h) { return substituteStrings(g, h, true); }

Grammar applyHomomorphism(const Grammar& g, const std::map<Label, Word>& phi) {
    StringSubstitution h;
    for (auto& [a, w] : phi) h[a] = std::set<Word>{w};
    return applyStringSubstitution(g, h);
}

Grammar applyWeakCoding(const Grammar& g, const std::map<Label, Word>& phi) {
    for (auto& [a, w] : phi)
        if (w.size() > 1) throw TypeMismatch("weak coding maps '" + a + "' to a word of length " + std::to_string(w.size()));
    return applyHomomorphism(g, phi);
}

Grammar inverseHomomorphism(const Grammar& g, const std::map<Label, Word>& phi) {
    requireString(g);
    auto alpha = letters(g);
    FreshNames fresh(g.signature);
    for (auto& [b, w] : phi) {
        fresh.reserve(b);
        for (auto& a : w) fresh.reserve(a);
    }
    std::map<Label, Label> bar;
    for (auto& [b, w] : phi) bar[b] = fresh.make(b + "~");
    std::vector<Label> barred;
    for (auto& [b, x] : bar) barred.push_back(x);

    // a -> B~* a B~*
    StringSubstitution sigma;
    for (auto& a : alpha) {
        Dfa d;
        d.states = {"pre", "post"};
        d.alphabet = barred;
        d.alphabet.push_back(a);
        d.start = 0;
        d.finals = {false, true};
        std::vector<int> pre(barred.size(), 0), post(barred.size(), 1);
        pre.push_back(1);
        post.push_back(-1);
        d.delta = {pre, post};
        sigma[a] = importHR(regularToHR(d));
    }
    Grammar spread = substituteStrings(g, sigma, false);

    // K = { phi(b) b~ : b in B }*
    Nfa n;
    n.starts = {n.addState("0", true)};
    for (auto& [b, w] : phi) {
        int cur = 0;
        for (auto& a : w) {
            int nxt = n.addState(b + ":" + std::to_string(cur));
            n.addTransition(cur, a, nxt);
            cur = nxt;
        }
        n.addTransition(cur, bar.at(b), 0);
    }
    Dfa k = determinizeComplete(n);
    std::vector<Label> missing;
    for (auto& a : alpha)
        if (k.letterIndex(a) < 0) missing.push_back(a);
    Grammar meet = intersectRegular(spread, extendAlphabet(k, missing, false));

    StringSubstitution psi;
    auto kept = letters(meet);
    for (auto& a : kept) {
        auto it = std::find_if(bar.begin(), bar.end(), [&](const auto& kv) { return kv.second == a; });
        if (it != bar.end())
            psi[a] = std::set<Word>{Word{it->first}};
        else
            psi[a] = std::set<Word>{Word{}};
    }
    Grammar out = substituteStrings(meet, psi, false);
    out.epsilon = g.epsilon;
    std::set<Word> erased;
    for (auto& [b, w] : phi)
        if (w.empty()) erased.insert({b});
    if (g.epsilon && !erased.empty()) {
        out = unionL(out, plusL(wordsGrammar(erased)));
        out.epsilon = true;
    }
    return out;
}

Grammar freeProductWP(const Grammar& g1, const Grammar& g2) {
    requireString(g1);
    requireString(g2);
    auto a1 = letters(g1), a2 = letters(g2);
    for (auto& a : a1)
        if (a2.count(a)) throw ValidationError("free product needs disjoint alphabets; '" + a + "' is shared");
    Grammar l = unionL(g1, g2);
    // insert a word of either factor next to any letter; x itself stays as x
    HypergraphSubstitution h;
    std::set<Label> all = a1;
    all.insert(a2.begin(), a2.end());
    auto c = carrierLetters({&g1, &g2}, 3);
    for (auto& x : all) {
        Grammar just = wordsGrammar({{x}});
        Dfa k = dfaForWords({{c[0], c[1]}, {c[0], c[2]}, {c[1], c[0]}, {c[2], c[0]}}, c);
        h.images[x] = viaCarrier(k, {just, g1, g2}, false);
        h.keepSelf.insert(x);
    }
    Grammar out = iterateSubstitutions(l, {h});
    out.emptyLabel = l.emptyLabel;
    out.epsilon = true;
    return out;
}

}  // namespace phrg
