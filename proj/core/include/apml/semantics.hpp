#ifndef APML_SEMANTICS_HPP
#define APML_SEMANTICS_HPP

// Finite semantics: ordered Kripke structures with an exhaustive enumerator
// and countermodel finder, and finite distributive lattices with adjoint
// modality pairs (including the complex algebra of a frame).

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apml/calculus.hpp"
#include "apml/syntax.hpp"

namespace apml {

/// Bit w set iff world w is in the set. Enumeration supports at most 4 worlds.
using WorldSet = std::uint32_t;

constexpr int kMaxWorlds = 4;

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KripkeFrame {
  int worlds = 0;
  /// down[w] = { v | v ≤ w }.
  std::vector<WorldSet> down;
  std::vector<Agent> agents;
  /// succ[a][w] = { v | w R_a v }, a indexing agents.
  std::vector<std::vector<WorldSet>> succ;

  bool leq(int v, int w) const { return (down[w] >> v & 1U) != 0; }
  /// Empty relation for agents the frame does not mention.
  bool related(const Agent& a, int w, int v) const;
  /// nullptr when the agent is absent.
  const std::vector<WorldSet>* relation(const Agent& a) const;
  WorldSet all() const { return worlds >= 32 ? ~WorldSet{0} : (WorldSet{1} << worlds) - 1; }
  bool is_downset(WorldSet s) const;
};

struct KripkeStructure {
  KripkeFrame frame;
  std::map<std::string, WorldSet> valuation;
};

/// Violated order axioms or frame conditions; empty when the frame is valid.
std::vector<std::string> frame_violations(const KripkeFrame& frame);
/// Frame violations plus non-downward-closed valuations.
std::vector<std::string> structure_violations(const KripkeStructure& s);

/// Satisfaction at one world, clause by clause. Throws SemanticsError on an
/// atom without a valuation entry.
bool eval_kripke(const KripkeStructure& s, int world, const Formula& f);
/// Set of worlds satisfying f.
WorldSet truth_set(const KripkeStructure& s, const Formula& f);
/// Every world satisfying the antecedent's translation satisfies the succedent.
bool sequent_true_kripke(const KripkeStructure& s, const Sequent& seq);

/// Partial orders on n worlds, as down-set tables, all labelings.
const std::vector<std::vector<WorldSet>>& labeled_orders(int n);
/// Relations on an order satisfying the frame condition, as successor tables.
std::vector<std::vector<WorldSet>> closed_relations(int n, const std::vector<WorldSet>& down);
/// Down-closed subsets of an order.
std::vector<WorldSet> downsets(int n, const std::vector<WorldSet>& down);

/// Frames with exactly n worlds and the given agents, one per isomorphism class.
const std::vector<KripkeFrame>& canonical_frames(int n, const std::vector<Agent>& agents);

struct KripkeBounds {
  int max_worlds = 3;
  std::vector<Agent> agents;
  std::vector<std::string> atoms;
};

/// Streams every structure within bounds (1..max_worlds worlds) once per
/// isomorphism class. The callback returns false to stop early.
void enumerate_structures(const KripkeBounds& bounds,
                          const std::function<bool(const KripkeStructure&)>& visit);
std::size_t count_structures(const KripkeBounds& bounds);
/// Independent count: generates every labeled structure with exactly n worlds
/// and collects isomorphism-invariant encodings.
std::size_t count_structures_naive(int n, int agents, int atoms);

struct Countermodel {
  KripkeStructure structure;
  int world = 0;
};

/// Checks the sequent in every structure over the bounds' agents and the
/// sequent's atoms (valuations not reduced by symmetry). Returns a falsifying
/// structure, if any.
std::optional<Countermodel> find_violation(const Sequent& seq, int max_worlds,
                                           const std::vector<Agent>& agents);

struct CountermodelBounds {
  int max_worlds = 3;
  std::size_t max_agents = 2;
  std::size_t max_atoms = 3;
  /// Polled between frames; the search gives up once it reads true.
  const std::atomic<bool>* cancel = nullptr;
};

/// Smallest structure (by world count) satisfying every assumption
/// ◆_A(p) ≤ consequent in which the sequent fails. Agents are those of the
/// sequent; atoms are those of the sequent closed under the assumptions'
/// consequents. Returns nullopt when nothing is found or when the agent or
/// atom count exceeds the bounds.
std::optional<Countermodel> find_countermodel(const Sequent& seq, const CountermodelBounds& bounds = {},
                                              const Assumptions& assumptions = {});

/// Atoms the countermodel search must interpret for a query.
std::vector<std::string> relevant_atoms(const Sequent& seq, const Assumptions& assumptions);

std::string countermodel_to_json(const Countermodel& m, int indent = 2);
std::string countermodel_to_text(const Countermodel& m);

/// Finite bounded lattice with per-agent unary maps. Elements are 0..size-1.
struct FiniteDLAM {
  int size = 0;
  std::vector<std::vector<bool>> leq;
  std::vector<Agent> agents;
  std::vector<std::vector<int>> dia;
  std::vector<std::vector<int>> box;
  /// Filled by make_dlam; -1 where no bound exists.
  std::vector<std::vector<int>> meet;
  std::vector<std::vector<int>> join;
  int bottom = -1;
  int top = -1;
  /// Set for complex algebras: the down-set each element stands for.
  std::vector<WorldSet> downsets;

  int agent_index(const Agent& a) const;
};

/// Computes meet/join tables and bounds from the order.
FiniteDLAM make_dlam(std::vector<std::vector<bool>> leq, std::vector<Agent> agents,
                     std::vector<std::vector<int>> dia, std::vector<std::vector<int>> box);

/// Down-sets ordered by inclusion with □Z = {w | ∀v, wRv ⇒ v∈Z} and
/// ◆Z = {w | ∃v, vRw ∧ v∈Z}. Throws SemanticsError on an invalid frame.
FiniteDLAM complex_algebra(const KripkeFrame& frame);

struct LawViolation {
  std::string law;
  std::string witness;
};

struct DlamReport {
  std::vector<LawViolation> violations;
  bool ok() const { return violations.empty(); }
  bool violates(const std::string& law) const;
};

/// Law identifiers, in checking order.
/// Structure: "partial-order", "meet", "join", "bounds", "distributivity".
/// Definition: "dia-monotone", "box-monotone", "adjunction".
/// Derived: "dia-joins", "box-meets", "dia-meets", "box-joins", "dia-bot",
///          "box-top", "counit", "unit".
const std::vector<std::string>& dlam_laws();
DlamReport dlam_validate(const FiniteDLAM& dlam);

using Interpretation = std::map<std::string, int>;

/// Meaning of a formula; throws SemanticsError for an uninterpreted atom or
/// an agent the algebra lacks.
int interpret(const FiniteDLAM& dlam, const Interpretation& interp, const Formula& f);
int interpret(const FiniteDLAM& dlam, const Interpretation& interp, const Context& ctx);
bool sequent_true_dlam(const FiniteDLAM& dlam, const Interpretation& interp, const Sequent& seq);

/// The valuation of a structure read as an interpretation in its complex algebra.
Interpretation induced_interpretation(const KripkeStructure& s, const FiniteDLAM& algebra);

}  // namespace apml

#endif  // APML_SEMANTICS_HPP
