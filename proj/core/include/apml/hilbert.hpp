#ifndef APML_HILBERT_HPP
#define APML_HILBERT_HPP

// Hilbert-style system on sequents m ⊢ m′: axiom schemas, instance
// generation, a step-list derivation checker and its JSON form.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apml/syntax.hpp"

namespace apml {

struct HilbertSequent {
  Formula left;
  Formula right;

  friend bool operator==(const HilbertSequent&, const HilbertSequent&) = default;
};

enum class HilbertAxiom {
  Identity,        // m ⊢ m
  BotLeft,         // ⊥ ⊢ m
  TopRight,        // m ⊢ ⊤
  Distributivity,  // m ∧ (m′ ∨ m″) ⊢ (m ∧ m′) ∨ (m ∧ m″)
  OrIntroLeft,     // m ⊢ m ∨ m′
  OrIntroRight,    // m′ ⊢ m ∨ m′
  AndElimLeft,     // m ∧ m′ ⊢ m
  AndElimRight,    // m ∧ m′ ⊢ m′
  DiaJoin,         // ◆_A(m ∨ m′) ⊢ ◆_A m ∨ ◆_A m′
  DiaBot,          // ◆_A ⊥ ⊢ ⊥
  BoxMeet,         // □_A m ∧ □_A m′ ⊢ □_A(m ∧ m′)
  BoxTop,          // ⊤ ⊢ □_A ⊤
  Counit,          // ◆_A □_A m ⊢ m
  Unit,            // m ⊢ □_A ◆_A m
};

const std::vector<HilbertAxiom>& hilbert_axioms();
std::string_view axiom_name(HilbertAxiom a);
/// Throws std::invalid_argument for unknown names.
HilbertAxiom axiom_from_name(std::string_view name);

/// The schema with metavariables m, n, k for m, m′, m″ and agent A.
HilbertSequent axiom_schema(HilbertAxiom a);

struct AxiomInstance {
  HilbertAxiom axiom;
  HilbertSequent sequent;
};

/// Every schema instantiated with every assignment of the given atoms to its
/// formula metavariables and of the given agents to A.
std::vector<AxiomInstance> axiom_instances(const std::vector<std::string>& atoms,
                                           const std::vector<Agent>& agents);

struct HilbertBinding {
  std::map<std::string, Formula> formulas;
  std::optional<Agent> agent;
};

/// Matches a concrete sequent against the schema; nullopt on mismatch.
std::optional<HilbertBinding> match_axiom(HilbertAxiom a, const HilbertSequent& s);

enum class HilbertRule { Axiom, Cut, Or, And, Dia, Box };

std::string_view hilbert_rule_name(HilbertRule r);
HilbertRule hilbert_rule_from_name(std::string_view name);

struct HilbertStep {
  HilbertSequent conclusion;
  HilbertRule rule = HilbertRule::Axiom;
  std::optional<HilbertAxiom> axiom;  // for Axiom steps
  std::optional<Agent> agent;         // for Dia/Box steps
  std::vector<std::size_t> premisses;  // indices of earlier steps
};

/// Steps in order; the last step's conclusion is the derived sequent.
struct HilbertDerivation {
  std::vector<HilbertStep> steps;
};

struct HilbertRejection {
  std::size_t step = 0;
  std::string message;
};

struct HilbertCheck {
  std::vector<HilbertRejection> rejections;
  bool ok() const { return rejections.empty(); }
  std::string report() const;
};

HilbertCheck check_hilbert(const HilbertDerivation& d);

/// The one-formula tree sequent {m} ⊢ m′.
Sequent to_sequent(const HilbertSequent& s);
std::string to_string(const HilbertSequent& s);

/// {"steps": [{"conclusion": "m |- n", "rule": "axiom", "axiom": "counit",
///  "agent": "A", "premisses": [..]}]}
std::string hilbert_to_json(const HilbertDerivation& d, int indent = 2);
/// Throws SyntaxError on malformed documents.
HilbertDerivation hilbert_from_json(std::string_view text);

}  // namespace apml

#endif  // APML_HILBERT_HPP
