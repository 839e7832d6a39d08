#ifndef APML_SCENARIOS_HPP
#define APML_SCENARIOS_HPP

// Muddy children: assumption sets and tagged queries per announcement stage,
// for the honest father and for the liar variant.

#include <string>
#include <string_view>
#include <vector>

#include "apml/calculus.hpp"
#include "apml/syntax.hpp"

namespace apml {

/// Largest supported number of children (2^n state atoms).
constexpr int kMaxChildren = 8;

struct MuddyRound {
  enum Kind { BeforeFather, AfterFather, AfterRound };
  Kind kind = BeforeFather;
  /// Announcement rounds completed; meaningful for AfterRound only.
  int round = 0;

  friend bool operator==(const MuddyRound&, const MuddyRound&) = default;
};

/// "before_father", "after_father", "after_round(r)".
std::string round_name(const MuddyRound& r);
/// Throws std::invalid_argument.
MuddyRound parse_round(std::string_view text);

enum class MuddyVariant { Honest, Liar };

struct MuddyConfig {
  int n = 2;
  /// Children 1..k are muddy. Always 0 for the liar variant.
  int k = 2;
  MuddyRound round;
  MuddyVariant variant = MuddyVariant::Honest;
};

/// Throws std::invalid_argument unless 1 ≤ n ≤ kMaxChildren and either
/// (honest) 1 ≤ k ≤ n with rounds 1..k-1, or (liar) k = 0 before or after
/// the father's announcement.
void validate(const MuddyConfig& config);

/// Every valid configuration with 1 ≤ n ≤ max_n, honest then liar.
std::vector<MuddyConfig> all_configs(int max_n);

/// {"n": 3, "k": 2, "round": "after_round(1)", "variant": "honest"}.
MuddyConfig muddy_config_from_json(std::string_view text);
std::string muddy_config_to_json(const MuddyConfig& config);
std::string describe(const MuddyConfig& config);

/// Children are 1-based. "s{1,2}" for {1,2}, "s{}" for the empty set.
std::string state_atom(const std::vector<int>& children);
std::string state_atom(unsigned mask);
/// Agent named by the child's number.
Agent child(int i);

/// Whether an announcement up to this stage has ruled out the state.
bool eliminated(unsigned state, const MuddyRound& round);

/// Child i in state β considers β and β with i's forehead flipped possible,
/// minus eliminated states. Rules are emitted for the true state and every
/// state reachable through consequents; empty consequents are skipped.
Assumptions build_assumptions(const MuddyConfig& config);

struct MuddyQuery {
  std::string label;
  Sequent sequent;
  bool expect_provable = true;
};

/// Uncertainty, knowledge and control queries for the configuration.
std::vector<MuddyQuery> build_queries(const MuddyConfig& config);

}  // namespace apml

#endif  // APML_SCENARIOS_HPP
