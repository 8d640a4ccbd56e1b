// Writes the fixture grammars as JSON into the directory given as argv[1].
#include <fstream>
#include <iostream>

#include "fixtures.hpp"
#include "phrg/io.hpp"

using namespace phrg;

namespace {

void write(const std::string& dir, const std::string& name, const Json& j) {
    std::ofstream f(dir + "/" + name + ".json");
    f << dumpJson(j);
    if (!f) throw std::runtime_error("cannot write " + name);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: dump_fixtures DIR\n";
        return 2;
    }
    std::string dir = argv[1];
    for (auto& [name, g] : fx::namedGrammars()) write(dir, name, toJson(g));
    write(dir, "anbn-hr", toJson(fx::anbnHR()));
    write(dir, "dyck-hr", toJson(fx::dyckHR()));
    for (auto& [name, e] : fx::et0lSuite()) write(dir, name + "-et0l", toJson(e));

    std::set<Word> short5;
    for (std::size_t n = 1; n <= 5; ++n) short5.insert(Word(n, "a"));
    write(dir, "a-upto-5-dfa", toJson(dfaForWords(short5, {"a"})));

    HypergraphSubstitution box;
    for (auto& [x, imgs] : fx::fbtCoreToBox()) box.images[x] = imgs;
    write(dir, "fbt-subst", toJson(box));
    write(dir, "double-hom", homomorphismToJson({{"a", {"b", "b"}}}));
    return 0;
}
