#ifndef APML_SEARCH_HPP
#define APML_SEARCH_HPP

// Backward proof search, and the combined prover/refuter.

#include <atomic>
#include <cstddef>
#include <optional>
#include <string>

#include "apml/calculus.hpp"
#include "apml/semantics.hpp"

namespace apml {

struct SearchConfig {
  /// Longest branch, counted in rule applications.
  std::size_t max_depth = 400;
  std::size_t max_boxl_per_branch = 256;
  std::size_t max_nodes = 2'000'000;
  bool loop_check = true;
  Assumptions assumptions;
  /// Debug switch. When false, BoxL replaces the principal item by the new
  /// formula instead of keeping it; derivations found this way do not check.
  bool duplicate_boxl_principal = true;
  const std::atomic<bool>* cancel = nullptr;
};

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t max_depth_reached = 0;
  std::size_t loop_prunes = 0;
  std::size_t boxl_suppressed = 0;
  /// Some branch was cut by a depth, BoxL or node bound, or by cancellation.
  bool bound_hit = false;
  bool cancelled = false;
};

enum class Verdict { Proved, NotProvedWithinBounds, Refuted };

std::string_view verdict_name(Verdict v);

struct SearchOutcome {
  Verdict verdict = Verdict::NotProvedWithinBounds;
  Derivation derivation;                    // set when Proved
  std::optional<Countermodel> countermodel;  // set when Refuted
  SearchStats stats;
};

/// Left rules (including BoxL and Assn, which only add information) are
/// applied eagerly at every depth; a formula is never added twice to the
/// same level. AndR and BoxR follow, then the branching choices OrR1/OrR2
/// and DiaR with backtracking.
SearchOutcome prove(const Sequent& s, const SearchConfig& config = {});

/// Runs the prover on a worker thread and the countermodel search on the
/// calling thread; the first to succeed cancels the other.
SearchOutcome decide(const Sequent& s, const SearchConfig& config = {},
                     const CountermodelBounds& model_bounds = {});

std::string stats_to_json(const SearchStats& stats);

}  // namespace apml

#endif  // APML_SEARCH_HPP
