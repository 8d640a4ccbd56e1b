// Thin pybind11 layer. Documents cross the boundary as JSON text; the Python
// package turns them into dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

#include "phrg/canonical.hpp"
#include "phrg/cli.hpp"
#include "phrg/decide.hpp"
#include "phrg/error.hpp"
#include "phrg/et0l.hpp"
#include "phrg/io.hpp"
#include "phrg/strings.hpp"
#include "phrg/transform.hpp"

namespace py = pybind11;
using namespace phrg;

namespace {

Grammar load(const std::string& text) { return loadGrammar(parseJson(text)); }
std::string dump(const Json& j) { return dumpJson(j); }

std::vector<std::string> wordList(const std::set<Word>& words) {
    std::vector<Word> v(words.begin(), words.end());
    std::stable_sort(v.begin(), v.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
    std::vector<std::string> out;
    for (auto& w : v) out.push_back(wordToString(w));
    return out;
}

}  // namespace

PYBIND11_MODULE(_phrg, m) {
    m.doc() = "Parallel hyperedge replacement grammars";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<UnsupportedShape>(m, "UnsupportedShape", base.ptr());

    m.def("normalize", [](const std::string& text) { return dump(toJson(load(text))); },
          "Load any grammar-like document (grammar, hr, et0l) and return it as a grammar document.");

    m.def("validate", [](const std::string& text) {
        auto rep = validate(grammarFromJson(parseJson(text)));
        py::dict d;
        d["ok"] = rep.ok;
        d["errors"] = rep.errors;
        d["notices"] = rep.notices;
        d["order"] = rep.order;
        d["tables"] = rep.tableCount;
        d["synchronised"] = rep.synchronised;
        return d;
    });

    m.def(
        "enumerate",
        [](const std::string& text, int maxSteps, std::size_t maxEdges, std::size_t maxResults) {
            Bounds b{maxSteps, maxEdges, maxResults, 0};
            Enumeration e;
            {
                py::gil_scoped_release nogil;
                e = enumerateLanguage(load(text), b);
            }
            py::list graphs;
            for (auto& [key, h] : e.graphs) graphs.append(dump(toJson(h)));
            return py::make_tuple(graphs, e.truncated());
        },
        py::arg("grammar"), py::arg("max_steps") = 8, py::arg("max_edges") = 32, py::arg("max_results") = 10000);

    m.def(
        "words",
        [](const std::string& text, std::size_t maxLen, int maxSteps) {
            StringBounds b;
            b.maxLen = maxLen;
            b.maxSteps = maxSteps;
            StringLanguage lang;
            {
                py::gil_scoped_release nogil;
                lang = stringLanguage(load(text), b);
            }
            return py::make_tuple(wordList(lang.words), lang.truncated);
        },
        py::arg("grammar"), py::arg("max_len") = 12, py::arg("max_steps") = 8);

    m.def("is_empty", [](const std::string& text) {
        py::gil_scoped_release nogil;
        return isEmpty(load(text));
    });

    m.def("is_member", [](const std::string& text, const std::string& word) {
        auto w = parseWord(word);
        py::gil_scoped_release nogil;
        return isMember(load(text), w);
    });

    m.def("transform", [](const std::string& name, const std::string& text) {
        return dump(toJson(applyTransform(name, load(text))));
    });

    m.def("intersect", [](const std::string& text, const std::string& dfa) {
        return dump(toJson(intersectRegular(load(text), dfaFromJson(parseJson(dfa)))));
    });

    m.def("substitute", [](const std::string& text, const std::string& subst) {
        return dump(toJson(substitute(load(text), substitutionFromJson(parseJson(subst)))));
    });

    m.def("union", [](const std::string& a, const std::string& b) { return dump(toJson(unionL(load(a), load(b)))); });
    m.def("concat", [](const std::string& a, const std::string& b) { return dump(toJson(concatL(load(a), load(b)))); });
    m.def("plus", [](const std::string& a) { return dump(toJson(plusL(load(a)))); });
    m.def("homomorphism", [](const std::string& text, const std::string& phi) {
        return dump(toJson(applyHomomorphism(load(text), homomorphismFromJson(parseJson(phi)))));
    });
    m.def("inverse_homomorphism", [](const std::string& text, const std::string& phi) {
        return dump(toJson(inverseHomomorphism(load(text), homomorphismFromJson(parseJson(phi)))));
    });
    m.def("free_product", [](const std::string& a, const std::string& b) {
        return dump(toJson(freeProductWP(load(a), load(b))));
    });
    m.def("export_et0l", [](const std::string& text) { return dump(toJson(exportET0L(load(text)))); });

    m.def("canonical_form", [](const std::string& text) {
        return canonicalForm(hypergraphFromJson(parseJson(text)));
    });
    m.def("to_dot", [](const std::string& text) { return toDot(load(text)); });

    m.def("run", [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"phrg"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        int code = cli::run(argv, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
