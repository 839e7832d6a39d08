#ifndef APML_TRANSFORM_HPP
#define APML_TRANSFORM_HPP

// Admissible structural rules as derivation-to-derivation procedures:
// weakening, inversion, ⊤ substitution, contraction, cut elimination and K.
//
// Every procedure takes cut-free derivations (Assn nodes allowed) and returns
// a cut-free derivation whose root conclusion is exactly the stated sequent,
// in the stated presentation order.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apml/calculus.hpp"
#include "apml/syntax.hpp"

namespace apml {

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Δ[Γ] ⊢ m  ↦  Δ[extra, Γ] ⊢ m, with `extra` plugged at `level`.
/// Height is preserved.
Derivation weaken(const Derivation& d, const Path& level, const Context& extra);

/// Δ[m₁∧m₂] ⊢ m  ↦  Δ[m₁, m₂] ⊢ m.
Derivation invert_and_left(const Derivation& d, const Occurrence& occ);
/// Δ[m₁∨m₂] ⊢ m  ↦  (Δ[m₁] ⊢ m, Δ[m₂] ⊢ m).
std::pair<Derivation, Derivation> invert_or_left(const Derivation& d, const Occurrence& occ);
/// Δ[◆_A m] ⊢ m′  ↦  Δ[(m)^A] ⊢ m′.
Derivation invert_dia_left(const Derivation& d, const Occurrence& occ);
/// Γ ⊢ □_A m  ↦  (Γ)^A ⊢ m.
Derivation invert_box_right(const Derivation& d);
/// Γ ⊢ m₀∧m₁  ↦  Γ ⊢ m_side.
Derivation invert_and_right(const Derivation& d, int side);

/// Δ[⊤] ⊢ m  ↦  Δ[replacement] ⊢ m.
Derivation top_weak(const Derivation& d, const Occurrence& occ, const Context& replacement);

/// Δ[I, I] ⊢ m  ↦  Δ[I] ⊢ m. The items at `keep` and `drop` of `level` must be
/// equal as nested multisets; the result's conclusion is the input's with the
/// `drop` item removed.
Derivation contract_item(const Derivation& d, const Path& level, std::size_t keep, std::size_t drop);

/// Δ[Γ, Γ] ⊢ m  ↦  Δ[Γ] ⊢ m, given (keep, drop) index pairs at one level.
/// Every drop item is removed from the conclusion.
Derivation contract(const Derivation& d, const Path& level,
                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

struct CutOptions {
  /// Nesting limit for the reduction; exceeding it raises TransformError.
  std::size_t max_depth = 20000;
  /// Check both inputs before reducing.
  bool validate_inputs = true;
  Assumptions assumptions;
};

struct CutReport {
  /// Case label applied at each reduction step, in call order, e.g. "(viii)"
  /// or "(xi)(h)".
  std::vector<std::string> labels;
  std::size_t calls = 0;
  std::size_t max_depth = 0;
  /// Number of recursive calls whose rank was compared with the caller's.
  std::size_t rank_checks = 0;
};

/// Given Γ ⊢ m and Δ′[m] ⊢ m′ with m at `occ`, builds a cut-free Δ′[Γ] ⊢ m′,
/// where Δ′[Γ] is replace(Δ′[m], occ, Γ). Every recursive call is made at a
/// strictly smaller rank (size of m, sum of heights); a violation raises
/// TransformError.
Derivation eliminate_cut(const Derivation& d1, const Derivation& d2, const Occurrence& occ,
                         const CutOptions& options = {}, CutReport* report = nullptr);

/// Removes every Cut node, innermost first. The conclusion is unchanged.
Derivation eliminate_cuts(const Derivation& d, const CutOptions& options = {},
                          CutReport* report = nullptr);

/// Δ[Γ^A, Γ′^A, (Γ,Γ′)^A] ⊢ m  ↦  Δ[(Γ,Γ′)^A] ⊢ m. The three items are given
/// by index at `level`; the result drops the first two.
Derivation derive_K(const Derivation& d, const Path& level, std::size_t gamma,
                    std::size_t gamma_prime, std::size_t joint, const CutOptions& options = {},
                    CutReport* report = nullptr);

/// The case labels eliminate_cut may report.
const std::vector<std::string>& cut_case_labels();

}  // namespace apml

#endif  // APML_TRANSFORM_HPP
