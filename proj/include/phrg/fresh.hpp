#pragma once

#include <set>
#include <string>

#include "phrg/hypergraph.hpp"

namespace phrg {

// Names introduced by constructions live under this prefix.
inline constexpr char kFreshPrefix = '$';

// Hands out label names that collide with nothing seen so far.
class FreshNames {
public:
    FreshNames() = default;
    explicit FreshNames(const Signature& taken) { reserve(taken); }

    void reserve(const Label& l) { taken_.insert(l); }
    void reserve(const Signature& sig) {
        for (auto& [l, t] : sig.types()) taken_.insert(l);
    }
    bool taken(const Label& l) const { return taken_.count(l) != 0; }

    Label make(const std::string& hint) {
        Label base = std::string(1, kFreshPrefix) + hint;
        Label name = base;
        for (int i = 2; taken_.count(name); ++i) name = base + "#" + std::to_string(i);
        taken_.insert(name);
        return name;
    }

private:
    std::set<Label> taken_;
};

}  // namespace phrg
