#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "phrg/transform.hpp"

// Reference implementations that share no code with the engine beyond the
// Hypergraph container.
namespace oracle {

using namespace phrg;

// Root = the single external node; every edge points parent -> child; each
// node has 0 or 2 children and all leaves sit on the same level.
bool isFullBinaryTree(const Hypergraph& h, const Label& label);
// Complete binary trees of depth 0, 1, ... with at most maxEdges edges.
std::vector<Hypergraph> fullBinaryTrees(std::size_t maxEdges, const Label& label);

// Directed Sierpinski triangle after `level` subdivisions; ext = corners.
Hypergraph sierpinskiTriangle(int level, const Label& label);

// Brute-force isomorphism by trying every node bijection (small graphs only).
bool permutationIsomorphic(const Hypergraph& g, const Hypergraph& h);

// Context-free recognition for an HR grammar whose rules are all string
// graphs without erasing rules.
bool cfAccepts(const HrGrammar& hr, const Word& w);

// Nonempty words over {x, xInv} with as many x as xInv.
std::set<Word> balancedWords(const Label& x, const Label& xInv, std::size_t maxLen);

// Smallest L with epsilon in L, closed under inserting a word of L1 or L2 at
// any position; words up to maxLen (epsilon removed from the result).
std::set<Word> insertionClosure(const std::set<Word>& l1, const std::set<Word>& l2, std::size_t maxLen);

// Words w over b of length 1..maxLen with inL(phi(w)).
std::set<Word> preimage(const std::map<Label, Word>& phi, const std::vector<Label>& b, std::size_t maxLen,
                        const std::function<bool(const Word&)>& inL);

}  // namespace oracle
