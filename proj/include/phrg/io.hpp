#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "phrg/automaton.hpp"
#include "phrg/et0l.hpp"
#include "phrg/grammar.hpp"
#include "phrg/strings.hpp"
#include "phrg/transform.hpp"

namespace phrg {

using Json = nlohmann::json;

inline constexpr const char* kFormat = "phrg/1";

// Throws ParseError with 1-based line/column on malformed text.
Json parseJson(const std::string& text);
Json readJsonFile(const std::string& path);
std::string dumpJson(const Json& j);  // two-space indent, trailing newline

// "grammar", "hr", "et0l", "dfa", "hypergraph", "substitution",
// "string-substitution", "homomorphism". Falls back to sniffing the fields.
std::string kindOf(const Json& j);

// Node ids in the input may be arbitrary ints; they are renumbered densely
// in the order "nodes" lists them.
Json toJson(const Hypergraph& h);
Hypergraph hypergraphFromJson(const Json& j);

Json toJson(const Dfa& d);
Dfa dfaFromJson(const Json& j);

Json toJson(const Grammar& g);
Grammar grammarFromJson(const Json& j);

Json toJson(const HrGrammar& hr);
HrGrammar hrFromJson(const Json& j);

Json toJson(const Et0lGrammar& e);
Et0lGrammar et0lFromJson(const Json& j);

// {"images": {X: [hypergraph...] | grammar}}
Json toJson(const HypergraphSubstitution& s);
HypergraphSubstitution substitutionFromJson(const Json& j);

// {"images": {a: [word...] | grammar}}
Json toJson(const StringSubstitution& s);
StringSubstitution stringSubstitutionFromJson(const Json& j);
// {"map": {a: word}}
std::map<Label, Word> homomorphismFromJson(const Json& j);
Json homomorphismToJson(const std::map<Label, Word>& phi);

// A string when every letter is one character, otherwise a list of letters.
Json wordToJson(const Word& w);
Word wordFromJson(const Json& j);

// Loads any grammar-like document as a PHR grammar (HR and ET0L are imported).
Grammar loadGrammar(const Json& j);

std::string toDot(const Hypergraph& h, const std::string& name = "H");
// One cluster per rule.
std::string toDot(const Grammar& g);

}  // namespace phrg
