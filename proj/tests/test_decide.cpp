#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "harness.hpp"
#include "phrg/decide.hpp"

using namespace phrg;

namespace {

const Label kBox = "□";

Word as(std::size_t n) { return Word(n, "a"); }

}  // namespace

TEST_CASE("labels of a graph") {
    CHECK(labelsOf(fx::fbtDepth2()) == LabelSet{kBox});
    CHECK(labelsOf(Hypergraph(2, {}, {})).empty());
    CHECK(labelsOf(handle("S", 1)) == LabelSet{"S"});

    auto hx = labelSetGraph({"S", "X"}, fx::fbt().signature);
    CHECK(hx.edgeCount() == 2);
    CHECK(hx.ext().empty());
    CHECK(labelsOf(hx) == LabelSet{"S", "X"});
}

TEST_CASE("label set successors") {
    auto p = fx::pow2Box();
    CHECK(labelSetSuccessors({kBox}, p.tables[0]) == std::set<LabelSet>{{kBox}});
    CHECK(labelSetSuccessors({}, p.tables[0]) == std::set<LabelSet>{{}});
    auto t = fx::fbt().tables[0];
    CHECK(labelSetSuccessors({"S"}, t) == std::set<LabelSet>{{}, {"X"}});
    CHECK(labelSetSuccessors({"Y"}, t) == std::set<LabelSet>{{"Y"}, {kBox}});
    CHECK(labelSetSuccessors({"X", "Y"}, t) ==
          std::set<LabelSet>{{"X", "Y"}, {"X", "Y", kBox}, {kBox}, {"Y", kBox}});
}

TEST_CASE("reachable label sets") {
    CHECK(reachableLabelSets(fx::pow2Box()) == std::set<LabelSet>{{kBox}});
    auto r = reachableLabelSets(fx::fbt());
    CHECK(r.count({kBox}));
    CHECK(r.count({"X", "Y"}));
    CHECK(r.count({}));
    CHECK(r.count({"F"}));
    // S is never produced again
    for (auto& x : r) CHECK_FALSE(x.count("S"));

    auto dead = fx::deadNoRule();
    for (auto& x : reachableLabelSets(dead)) {
        bool terminalOnly = std::all_of(x.begin(), x.end(), [&](const Label& l) { return dead.terminals.count(l); });
        CHECK_FALSE(terminalOnly);
    }
}

TEST_CASE("emptiness") {
    for (auto& c : fx::emptinessSuite()) {
        CAPTURE(c.name);
        auto res = decideEmptiness(c.g);
        CHECK(res.empty == c.empty);
        if (res.empty) continue;
        // the witness is a chain of label-set steps ending in terminals
        REQUIRE_FALSE(res.witness.empty());
        CHECK(res.witness.front().first == LabelSet{c.g.start});
        for (auto& l : res.witness.back().first) CHECK(c.g.terminals.count(l));
        if (c.g.control) continue;
        for (std::size_t i = 1; i < res.witness.size(); ++i) {
            auto& [x, table] = res.witness[i];
            REQUIRE(table >= 1);
            auto succ = labelSetSuccessors(res.witness[i - 1].first, c.g.tables[table - 1]);
            CHECK(succ.count(x));
        }
    }
    // a terminal start is a member after zero steps
    Grammar a = fx::pow2String();
    CHECK(decideEmptiness(a).witness.size() == 1);
}

TEST_CASE("state choices") {
    // no internal nodes
    auto ab = stringGraph({"a", "b"});
    Hypergraph chain(2, {{"a", {0, 1}}}, {0, 1});
    CHECK(choicesQ(chain, {0, 1}, 2).size() == 1);
    CHECK(choicesQ(ab, {0, 1}, 2).size() == 2);

    Hypergraph inner(4, {{"a", {0, 2}}, {"a", {2, 3}}, {"a", {3, 1}}}, {0, 1});
    auto four = choicesQ(inner, {0, 0}, 2);
    CHECK(four.size() == 4);
    for (auto& h : four) CHECK(h.edgeCount() == 3);

    // ext repeats a node but sigma disagrees on it
    Hypergraph loop(1, {{"a", {0, 0}}}, {0, 0});
    CHECK(choicesQ(loop, {0, 1}, 2).empty());
    CHECK(choicesQ(loop, {1, 1}, 2).size() == 1);

    auto enc = choicesQ(chain, {0, 1}, 2).front();
    CHECK(enc.edge(0).label == annotationName("a", {0, 1}));
}

TEST_CASE("augmented rules") {
    Rule zero{kBox, Hypergraph(0, {{kBox, {}}, {kBox, {}}}, {})};
    CHECK(augmentQ(zero, 0, 3).size() == choicesQ(zero.rhs, {}, 3).size());

    Rule id{"X", handle("X", 2)};
    auto rules = augmentQ(id, 2, 2);
    CHECK(rules.size() == 4);
    for (auto& r : rules) CHECK(r.rhs.edgeCount() == 1);

    Rule grow{"X", Hypergraph(3, {{"X", {0, 2}}, {"X", {2, 1}}}, {0, 1})};
    CHECK(augmentQ(grow, 2, 2).size() == 8);
}

TEST_CASE("rational intersection") {
    Grammar p = fx::pow2String();
    Dfa shortWords = dfaForWords({as(1), as(2), as(3), as(4), as(5)}, {"a"});
    Grammar cut = intersectRegular(p, shortWords);
    CHECK(validate(cut).ok);
    CHECK(harness::words(cut, 8) == std::set<Word>{as(1), as(2), as(4)});

    CHECK(harness::words(intersectRegular(p, dfaUniversal({"a"})), 8) == harness::words(p, 8));
    CHECK(isEmpty(intersectRegular(p, dfaEmptyLanguage({"a"}))));

    // two letters, words ending in b
    Nfa endsB;
    endsB.addState("s");
    endsB.addState("t", true);
    endsB.starts = {0};
    endsB.addTransition(0, "a", 0);
    endsB.addTransition(0, "b", 0);
    endsB.addTransition(0, "b", 1);
    Dfa d = determinizeComplete(endsB);
    for (auto g : {fx::dyck(), fx::threeTables()}) {
        std::set<Word> expected;
        for (auto& w : harness::words(g, 6))
            if (d.accepts(w)) expected.insert(w);
        auto letters = phrg::letters(g);
        Dfa dd = extendAlphabet(d, std::vector<Label>(letters.begin(), letters.end()), false);
        CHECK(harness::diff(expected, harness::words(intersectRegular(g, dd), 6)) == "");
    }

    // partial automata are completed, with a notice
    Dfa partial = dfaForWord(as(2), {"a"});
    partial.delta.pop_back();
    partial.states.pop_back();
    partial.finals.pop_back();
    for (auto& row : partial.delta)
        for (auto& q : row)
            if (q >= static_cast<int>(partial.size())) q = -1;
    IntersectionReport rep;
    Grammar two = intersectRegular(p, partial, &rep);
    CHECK(harness::words(two, 6) == std::set<Word>{as(2)});
    CHECK_FALSE(rep.notices.empty());
}

TEST_CASE("membership") {
    Grammar p = fx::pow2String();
    CHECK(isMember(p, as(4)));
    CHECK_FALSE(isMember(p, as(3)));
    CHECK(isMember(p, as(1)));
    CHECK(isMember(p, as(8)));
    CHECK_FALSE(isMember(p, as(6)));

    Grammar anbn = fx::anbn();
    CHECK(isMember(anbn, {"a", "a", "b", "b"}));
    CHECK_FALSE(isMember(anbn, {"a", "a", "b"}));

    auto stray = decideMembership(anbn, {"a", "z"});
    CHECK_FALSE(stray.member);
    CHECK_FALSE(stray.notice.empty());

    auto eps = decideMembership(anbn, {});
    CHECK_FALSE(eps.member);
    CHECK_FALSE(eps.notice.empty());
}

TEST_CASE("membership agrees with enumeration") {
    for (auto g : {fx::dyck(), fx::controlledString(), importET0L(fx::et0lAbc())}) {
        auto letters = phrg::letters(g);
        auto lang = harness::words(g, 4);
        for (auto& w : fx::allWords(std::vector<Label>(letters.begin(), letters.end()), 4)) {
            CAPTURE(wordToString(w));
            CHECK(isMember(g, w) == (lang.count(w) != 0));
        }
    }
}
