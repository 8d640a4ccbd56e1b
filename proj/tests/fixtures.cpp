#include "fixtures.hpp"

namespace fx {

namespace {

const Label kBox = "□";

Hypergraph str(const Word& w) { return stringGraph(w); }

Rule rule(const Label& lhs, Hypergraph rhs) { return {lhs, std::move(rhs)}; }

// Identity rules for the given type-2 letters.
std::vector<Rule> keep(const std::vector<Label>& letters) {
    std::vector<Rule> out;
    for (auto& a : letters) out.push_back(rule(a, str({a})));
    return out;
}

std::vector<Rule> operator+(std::vector<Rule> a, const std::vector<Rule>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Dfa controlDfa(std::vector<std::string> states, std::size_t tables, std::vector<std::vector<int>> delta,
               std::vector<bool> finals) {
    Dfa d;
    d.states = std::move(states);
    for (std::size_t i = 1; i <= tables; ++i) d.alphabet.push_back(tableLetter(static_cast<int>(i)));
    d.delta = std::move(delta);
    d.start = 0;
    d.finals = std::move(finals);
    return d;
}

}  // namespace

Grammar makeGrammar(const std::map<Label, int>& types, const std::set<Label>& terminals, const Label& start,
                     const std::vector<std::vector<Rule>>& tables) {
    Grammar g;
    g.signature = Signature(types);
    g.terminals = terminals;
    g.start = start;
    for (auto& t : tables) g.tables.push_back(Table{t});
    return g;
}

Grammar pow2Box() {
    Hypergraph two(0, {{kBox, {}}, {kBox, {}}}, {});
    return makeGrammar({{kBox, 0}}, {kBox}, kBox, {{rule(kBox, two)}});
}

Grammar pow2BoxControlled() {
    Grammar g = pow2Box();
    // q0 -1-> q1 -1-> q2 -1-> sink
    g.control = controlDfa({"q0", "q1", "q2", "sink"}, 1, {{1}, {2}, {3}, {3}}, {false, true, true, false});
    return g;
}

Grammar pow2String() { return makeGrammar({{"a", 2}}, {"a"}, "a", {{rule("a", str({"a", "a"}))}}); }

Grammar fbt() {
    std::map<Label, int> types{{"S", 1}, {"X", 2}, {"Y", 2}, {"F", 2}, {kBox, 2}};
    std::vector<Rule> t{
        rule("S", Hypergraph(1, {}, {0})),
        rule("S", Hypergraph(3, {{"X", {0, 1}}, {"X", {0, 2}}}, {0})),
        rule("X", Hypergraph(4, {{"Y", {0, 1}}, {"X", {1, 2}}, {"X", {1, 3}}}, {0, 1})),
        rule("X", Hypergraph(2, {{kBox, {0, 1}}}, {0, 1})),
        rule("Y", Hypergraph(2, {{"Y", {0, 1}}}, {0, 1})),
        rule("Y", Hypergraph(2, {{kBox, {0, 1}}}, {0, 1})),
        rule(kBox, Hypergraph(2, {{"F", {0, 1}}}, {0, 1})),
        rule("F", Hypergraph(2, {{"F", {0, 1}}}, {0, 1})),
    };
    return makeGrammar(types, {kBox}, "S", {t});
}

Hypergraph fbtDepth2() {
    // root 0; children 1, 2; grandchildren 3..6
    return Hypergraph(7,
                      {{kBox, {0, 1}},
                       {kBox, {0, 2}},
                       {kBox, {1, 3}},
                       {kBox, {1, 4}},
                       {kBox, {2, 5}},
                       {kBox, {2, 6}}},
                      {0});
}

Grammar sierpinski() {
    std::map<Label, int> types{{"S", 3}, {"X", 3}, {"F", 2}, {kBox, 2}};
    Hypergraph triangle(3, {{kBox, {0, 1}}, {kBox, {1, 2}}, {kBox, {2, 0}}}, {0, 1, 2});
    // 0 top, 1 right, 2 left; 3 mid(0,1), 4 mid(0,2), 5 mid(1,2)
    Hypergraph split(6, {{"X", {0, 3, 4}}, {"X", {4, 5, 2}}, {"X", {3, 1, 5}}}, {0, 1, 2});
    std::vector<Rule> t{
        rule("S", triangle),
        rule("S", Hypergraph(3, {{"X", {0, 1, 2}}}, {0, 1, 2})),
        rule("X", split),
        rule("X", triangle),
        rule(kBox, Hypergraph(2, {{"F", {0, 1}}}, {0, 1})),
        rule("F", Hypergraph(2, {{"F", {0, 1}}}, {0, 1})),
    };
    return makeGrammar(types, {kBox}, "S", {t});
}

Grammar fbtCore() {
    std::map<Label, int> types{{"S", 1}, {"X", 2}, {"Y", 2}};
    std::vector<Rule> t{
        rule("S", Hypergraph(1, {}, {0})),
        rule("S", Hypergraph(3, {{"X", {0, 1}}, {"X", {0, 2}}}, {0})),
        rule("X", Hypergraph(4, {{"Y", {0, 1}}, {"X", {1, 2}}, {"X", {1, 3}}}, {0, 1})),
        rule("Y", Hypergraph(2, {{"Y", {0, 1}}}, {0, 1})),
    };
    return makeGrammar(types, {"X", "Y"}, "S", {t});
}

FiniteSubstitution fbtCoreToBox() {
    Hypergraph box = handle(kBox, 2);
    return {{"X", {box}}, {"Y", {box}}};
}

HrGrammar anbnHR() {
    HrGrammar hr;
    hr.signature = Signature({{"S", 2}, {"a", 2}, {"b", 2}});
    hr.nonterminals = {"S"};
    hr.start = "S";
    hr.rules = {rule("S", str({"a", "S", "b"})), rule("S", str({"a", "b"}))};
    return hr;
}

HrGrammar dyckHR() {
    HrGrammar hr;
    hr.signature = Signature({{"S", 2}, {"a", 2}, {"b", 2}});
    hr.nonterminals = {"S"};
    hr.start = "S";
    hr.rules = {rule("S", str({"a", "S", "b"})), rule("S", str({"a", "b"})), rule("S", str({"S", "S"}))};
    return hr;
}

HrGrammar balancedHR(const Label& x, const Label& xInv) {
    HrGrammar hr;
    Label n = "N" + x;
    hr.signature = Signature({{n, 2}, {x, 2}, {xInv, 2}});
    hr.nonterminals = {n};
    hr.start = n;
    hr.rules = {rule(n, str({x, xInv})),    rule(n, str({xInv, x})), rule(n, str({x, n, xInv})),
                rule(n, str({xInv, n, x})), rule(n, str({n, n}))};
    return hr;
}

HrGrammar regularHR() {
    HrGrammar hr;
    hr.signature = Signature({{"S", 2}, {"a", 2}, {"b", 2}, {"c", 2}});
    hr.nonterminals = {"S"};
    hr.start = "S";
    hr.rules = {rule("S", str({"a", "b", "S"})), rule("S", str({"c"}))};
    return hr;
}

Grammar anbn() { return importHR(anbnHR()); }
Grammar dyck() { return importHR(dyckHR()); }

Et0lGrammar et0lPow2() {
    return {{"a"}, {"a"}, "a", {{{"a", {"a", "a"}}}}};
}

Et0lGrammar et0lAbc() {
    Et0lGrammar e;
    e.alphabet = {"S", "A", "B", "C", "F", "a", "b", "c"};
    e.terminals = {"a", "b", "c"};
    e.start = "S";
    std::vector<Et0lRule> letters{{"a", {"a"}}, {"b", {"b"}}, {"c", {"c"}}, {"F", {"F"}}};
    std::vector<Et0lRule> t1{{"S", {"A", "B", "C"}}, {"A", {"a", "A"}}, {"B", {"b", "B"}}, {"C", {"c", "C"}}};
    std::vector<Et0lRule> t2{{"S", {"F"}}, {"A", {"a"}}, {"B", {"b"}}, {"C", {"c"}}};
    t1.insert(t1.end(), letters.begin(), letters.end());
    t2.insert(t2.end(), letters.begin(), letters.end());
    e.tables = {t1, t2};
    return e;
}

Et0lGrammar et0lDyck() {
    return {{"S", "a", "b"},
            {"a", "b"},
            "S",
            {{{"S", {"a", "S", "b"}}, {"S", {"a", "b"}}, {"S", {"S", "S"}}, {"a", {"a"}}, {"b", {"b"}}}}};
}

Et0lGrammar et0lErasing() {
    Et0lGrammar e;
    e.alphabet = {"S", "A", "a", "b"};
    e.terminals = {"a", "b"};
    e.start = "S";
    e.tables = {{{"S", {"A", "S", "b"}}, {"A", {"a"}}, {"a", {"a"}}, {"b", {"b"}}},
                {{"S", {}}, {"A", {}}, {"a", {"a"}}, {"b", {"b"}}, {"b", {}}}};
    return e;
}

Et0lGrammar et0lFib() {
    return {{"a", "b"}, {"a", "b"}, "a", {{{"a", {"b"}}, {"b", {"a", "b"}}}}};
}

std::vector<std::pair<std::string, Et0lGrammar>> et0lSuite() {
    return {{"pow2", et0lPow2()},
            {"abc", et0lAbc()},
            {"dyck", et0lDyck()},
            {"erasing", et0lErasing()},
            {"fib", et0lFib()}};
}

Grammar threeTables() {
    std::map<Label, int> types{{"S", 2}, {"a", 2}, {"b", 2}, {"c", 2}};
    auto letters = keep({"a", "b", "c"});
    return makeGrammar(types, {"a", "b", "c"}, "S",
                       {std::vector<Rule>{rule("S", str({"a", "S"}))} + letters,
                        std::vector<Rule>{rule("S", str({"b", "S"}))} + letters,
                        std::vector<Rule>{rule("S", str({"c"}))} + letters});
}

Grammar controlledString() {
    std::map<Label, int> types{{"S", 2}, {"a", 2}, {"b", 2}};
    auto letters = keep({"a", "b"});
    Grammar g = makeGrammar(types, {"a", "b"}, "S",
                            {std::vector<Rule>{rule("S", str({"a", "S"}))} + letters,
                             std::vector<Rule>{rule("S", str({"b", "S"})), rule("S", str({"b"}))} + letters});
    // (12)*
    g.control = controlDfa({"even", "odd", "sink"}, 2, {{1, 2}, {2, 0}, {2, 2}}, {true, false, false});
    return g;
}

Grammar deadLoop() {
    return makeGrammar({{"S", 0}, {"a", 0}}, {"a"}, "S",
                       {{rule("S", handle("S", 0)), rule("a", handle("a", 0))}});
}

Grammar deadTrap() {
    Hypergraph xa(0, {{"X", {}}, {"a", {}}}, {});
    return makeGrammar({{"S", 0}, {"X", 0}, {"a", 0}, {"F", 0}}, {"a"}, "S",
                       {{rule("S", xa), rule("X", handle("a", 0)), rule("a", handle("F", 0)),
                         rule("F", handle("F", 0))}});
}

Grammar deadControl() {
    std::map<Label, int> types{{"S", 2}, {"a", 2}};
    Grammar g = makeGrammar(types, {"a"}, "S",
                            {{rule("S", str({"a"})), rule("a", str({"a"}))},
                             {rule("S", str({"S"})), rule("a", str({"a"}))}});
    // only table 2 may ever be used
    g.control = controlDfa({"ok", "sink"}, 2, {{1, 0}, {1, 1}}, {true, false});
    return g;
}

Grammar deadDesync() {
    Hypergraph ab(0, {{"A", {}}, {"B", {}}}, {});
    auto h = [](const Label& l) { return handle(l, 0); };
    std::map<Label, int> types{{"S", 0}, {"A", 0}, {"B", 0}, {"a", 0}, {"F", 0}};
    return makeGrammar(types, {"a"}, "S",
                       {{rule("S", ab), rule("A", h("a")), rule("B", h("B")), rule("a", h("F")), rule("F", h("F"))},
                        {rule("S", ab), rule("A", h("A")), rule("B", h("a")), rule("a", h("F")),
                         rule("F", h("F"))}});
}

Grammar deadNoRule() {
    std::map<Label, int> types{{"S", 2}, {"A", 2}, {"a", 2}};
    return makeGrammar(types, {"a"}, "S",
                       {{rule("S", str({"A"})), rule("A", str({"A", "A"})), rule("a", str({"a"}))}});
}

std::vector<EmptinessCase> emptinessSuite() {
    return {{"dead-loop", deadLoop(), true},         {"dead-trap", deadTrap(), true},
            {"dead-control", deadControl(), true},   {"dead-desync", deadDesync(), true},
            {"dead-no-rule", deadNoRule(), true},    {"pow2", pow2String(), false},
            {"fbt", fbt(), false},                   {"sierpinski", sierpinski(), false},
            {"anbn", anbn(), false},                 {"controlled", controlledString(), false}};
}

std::vector<std::pair<std::string, Grammar>> namedGrammars() {
    return {{"pow2", pow2String()},
            {"pow2-box", pow2Box()},
            {"pow2-box-controlled", pow2BoxControlled()},
            {"fbt", fbt()},
            {"fbt-core", fbtCore()},
            {"sierpinski", sierpinski()},
            {"anbn", anbn()},
            {"dyck", dyck()},
            {"abc", importET0L(et0lAbc())},
            {"three-tables", threeTables()},
            {"controlled", controlledString()},
            {"dead", deadTrap()},
            {"dead-desync", deadDesync()}};
}

std::vector<Word> allWords(const std::vector<Label>& alphabet, std::size_t maxLen) {
    std::vector<Word> out;
    std::vector<Word> layer{{}};
    for (std::size_t n = 1; n <= maxLen; ++n) {
        std::vector<Word> next;
        for (auto& w : layer)
            for (auto& a : alphabet) {
                Word v = w;
                v.push_back(a);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

}  // namespace fx
