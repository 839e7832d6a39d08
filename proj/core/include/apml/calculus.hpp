#ifndef APML_CALCULUS_HPP
#define APML_CALCULUS_HPP

// Rules of the nested sequent calculus, derivation trees and the
// node-by-node checker.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "apml/syntax.hpp"

namespace apml {

enum class RuleKind {
  Id, BotL, TopR, AndL, AndR, OrL, OrR1, OrR2, DiaL, DiaR, BoxL, BoxR, Cut, Assn
};

std::string_view rule_name(RuleKind kind);
/// Throws std::invalid_argument for unknown names.
RuleKind rule_from_name(std::string_view name);

/// Scenario assumption ◆_A(trigger) ⊃ consequent, consequent a disjunction of atoms.
struct AssumptionRule {
  Agent agent;
  std::string trigger;
  Formula consequent;

  /// "assn A p => q | r"
  std::string to_line() const;
  friend bool operator==(const AssumptionRule&, const AssumptionRule&) = default;
};

using Assumptions = std::vector<AssumptionRule>;

/// Throws std::invalid_argument unless the consequent is built from ∨ over atoms.
void validate(const AssumptionRule& rule);
/// Parses one `assn` line; throws SyntaxError.
AssumptionRule parse_assumption(std::string_view line);
/// Parses a whole file body: one rule per line, blank lines and '#' comments skipped.
Assumptions parse_assumptions(std::string_view text);
std::string format_assumptions(const Assumptions& rules);

/// Instance data of one rule application, relative to the conclusion's
/// stored item order.
///   principal  left rules, Id, BotL: occurrence of the principal formula;
///              BoxL, Assn: occurrence of the annotated item;
///              DiaR: top-level index of the annotated item (level empty);
///              Cut: occurrence of the cut formula in the second premiss.
///   inner      BoxL: index of □_A m inside the item; Assn: index of the trigger.
struct RuleApp {
  RuleKind kind = RuleKind::Id;
  Occurrence principal;
  std::size_t inner = 0;
  std::optional<AssumptionRule> assumption;
};

struct DerivationNode;
using Derivation = std::shared_ptr<const DerivationNode>;

struct DerivationNode {
  Sequent conclusion;
  RuleApp rule;
  std::vector<Derivation> premisses;
  std::size_t height = 1;
  std::size_t node_count = 1;
  std::size_t cut_count = 0;
  std::size_t assn_count = 0;
};

Derivation make_derivation(Sequent conclusion, RuleApp rule, std::vector<Derivation> premisses);

inline std::size_t height(const Derivation& d) { return d->height; }
inline bool cut_free(const Derivation& d) { return d->cut_count == 0; }

/// Thrown when rule instance data does not fit a sequent.
class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Premisses demanded by a rule applied backwards to a conclusion, in the
/// order the rule lists them. Not defined for Cut. Throws RuleError.
std::vector<Sequent> premisses_of(const Sequent& conclusion, const RuleApp& rule);

struct Instance {
  RuleApp rule;
  std::vector<Sequent> premisses;
};

/// Every rule instance with the given conclusion (Cut excluded). BoxL
/// instances whose new formula is already present at the item's level are
/// omitted.
std::vector<Instance> backward_instances(const Sequent& s, const Assumptions& assumptions);

struct Rejection {
  std::vector<std::size_t> node;  // premiss indices from the root
  std::string rule;
  std::string expected;
  std::string found;
};

struct CheckResult {
  std::vector<Rejection> rejections;
  bool ok() const { return rejections.empty(); }
  std::string report() const;
};

struct CheckOptions {
  bool allow_cut = false;
};

CheckResult check(const Derivation& d, const Assumptions& assumptions, CheckOptions options = {});

/// Re-presents the root with its conclusion in the given order (which must
/// be equivalent), remapping instance data. Premisses are untouched.
Derivation realign(const Derivation& d, const Context& order);

/// Cut-free derivation of Γ, m ⊢ m (m last in the antecedent).
Derivation derive_identity(const Context& gamma, const Formula& m);

/// Number of nodes with the given rule.
std::size_t count_rule(const Derivation& d, RuleKind kind);

}  // namespace apml

#endif  // APML_CALCULUS_HPP
