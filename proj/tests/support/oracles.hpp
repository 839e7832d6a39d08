#ifndef APML_TESTS_ORACLES_HPP
#define APML_TESTS_ORACLES_HPP

// Independent reference implementations used to cross-check the library.

#include <cstddef>
#include <string>
#include <vector>

#include "apml/semantics.hpp"
#include "apml/syntax.hpp"

namespace apml::oracle {

struct CorpusEntry {
  bool provable = true;
  std::string text;
  int line = 0;
};

/// Entries of tests/corpus/regression.txt.
std::vector<CorpusEntry> regression_corpus();

/// Operator count with ∧/∨ weighing 1 and modalities 2, by direct recursion.
std::size_t formula_size(const Formula& f);

/// Set-of-worlds semantics computed from the frame tables alone.
WorldSet worlds_of(const KripkeStructure& s, const Formula& f);
/// Meaning of an antecedent: items intersected, Γ^A read as ◆_A of Γ's meaning.
WorldSet worlds_of(const KripkeStructure& s, const Context& ctx);
bool holds(const KripkeStructure& s, const Sequent& seq);

/// Multiset equality by trying every bijection between item lists.
bool same_multiset(const Context& a, const Context& b);

/// Every structure over the given agents and atoms with exactly n worlds,
/// labeled (no symmetry reduction), with order and frame condition checked
/// by brute force.
std::vector<KripkeStructure> labeled_structures(int n, const std::vector<Agent>& agents,
                                                const std::vector<std::string>& atoms);

}  // namespace apml::oracle

#endif  // APML_TESTS_ORACLES_HPP
