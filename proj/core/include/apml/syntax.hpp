#ifndef APML_SYNTAX_HPP
#define APML_SYNTAX_HPP

// Formulas, items, contexts and sequents of adjoint positive modal logic,
// together with hole addressing (paths) and the size measure.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace apml {

/// Agent name, e.g. "A" or "2".
struct Agent {
  std::string name;

  Agent() = default;
  explicit Agent(std::string n) : name(std::move(n)) {}

  friend bool operator==(const Agent&, const Agent&) = default;
  friend auto operator<=>(const Agent&, const Agent&) = default;
};

enum class FormulaKind : std::uint8_t { Bot, Top, Atom, And, Or, Dia, Box };

/// Immutable formula tree with shared subterms. Copies are cheap.
class Formula {
 public:
  static Formula bot();
  static Formula top();
  static Formula atom(std::string name);
  static Formula conj(Formula left, Formula right);
  static Formula disj(Formula left, Formula right);
  static Formula dia(Agent agent, Formula body);
  static Formula box(Agent agent, Formula body);

  /// Defaults to ⊤.
  Formula();

  FormulaKind kind() const;
  bool is(FormulaKind k) const;

  /// Atom name; empty for non-atoms.
  const std::string& name() const;
  /// Agent of a modality.
  const Agent& agent() const;
  const Formula& left() const;
  const Formula& right() const;
  /// Body of a modality.
  const Formula& body() const { return left(); }

  /// Weighted operator count: ∧/∨ weigh 1, ◆/□ weigh 2.
  std::size_t size() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(FormulaKind kind, std::string name, Agent agent,
                      const Formula* left, const Formula* right);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  FormulaKind kind = FormulaKind::Top;
  std::string name;
  Agent agent;
  std::vector<Formula> kids;
  std::size_t size = 0;
  std::size_t hash = 0;
};

inline FormulaKind Formula::kind() const { return node_->kind; }
inline bool Formula::is(FormulaKind k) const { return node_->kind == k; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Agent& Formula::agent() const { return node_->agent; }
inline std::size_t Formula::size() const { return node_->size; }
inline std::size_t Formula::hash() const { return node_->hash; }

class Item;

/// Finite multiset of items. The vector order is a presentation only; use
/// equivalent() or canonical() for multiset comparison.
struct Context {
  std::vector<Item> items;

  bool empty() const;
  std::size_t count() const;
};

/// Either a formula or an agent-annotated context Γ^A.
class Item {
 public:
  static Item formula(Formula f);
  static Item annotated(Agent agent, Context context);

  Item() = default;
  Item(Formula f);  // NOLINT(google-explicit-constructor)

  bool is_formula() const { return annotated_ == false; }
  bool is_annotated() const { return annotated_; }
  const Formula& formula() const { return formula_; }
  const Agent& agent() const { return agent_; }
  const Context& context() const { return context_; }
  Context& context() { return context_; }

  /// Exact structural equality (presentation order sensitive).
  friend bool operator==(const Item& a, const Item& b);

 private:
  bool annotated_ = false;
  Formula formula_;
  Agent agent_;
  Context context_;
};

bool operator==(const Context& a, const Context& b);

struct Sequent {
  Context antecedent;
  Formula succedent;

  friend bool operator==(const Sequent&, const Sequent&) = default;
};

/// Address of a nesting level: each step is the index of an annotated item
/// to descend into. The empty path is the top level.
struct Path {
  std::vector<std::size_t> steps;

  Path() = default;
  Path(std::initializer_list<std::size_t> s) : steps(s) {}
  explicit Path(std::vector<std::size_t> s) : steps(std::move(s)) {}

  bool empty() const { return steps.empty(); }
  std::size_t depth() const { return steps.size(); }
  Path child(std::size_t index) const;
  bool is_prefix_of(const Path& other) const;

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// One item position: a level plus the index of the item at that level.
struct Occurrence {
  Path level;
  std::size_t index = 0;

  /// Path to the level inside this item (valid when the item is annotated).
  Path inside() const { return level.child(index); }

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

/// A context with a hole: the surrounding context and the level of the hole.
struct HoledContext {
  Context surround;
  Path hole;
};

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Size measure.
std::size_t size(const Formula& f);
std::size_t size(const Item& item);
std::size_t size(const Context& ctx);
std::size_t size(const Sequent& s);

// Hole addressing. All functions throw PathError on an invalid address.
const Context& level_at(const Context& ctx, const Path& path);
Context& level_at(Context& ctx, const Path& path);
bool valid_level(const Context& ctx, const Path& path);
bool valid_occurrence(const Context& ctx, const Occurrence& occ);
const Item& item_at(const Context& ctx, const Occurrence& occ);

/// Inserts the filler's items at the front of the addressed level.
Context plug(const Context& ctx, const Path& hole, const Context& filler);
/// Step-list concatenation; plug(c, combine(o, i), g) == plug(c, o, plug(f, i, g))
/// whenever c, f are the surroundings of o and i respectively.
Path combine(const Path& outer, const Path& inner);

Context apply(const HoledContext& delta, const Context& filler);
HoledContext combine(const HoledContext& outer, const HoledContext& inner);

/// Removes the addressed item, leaving a hole at its level.
std::pair<HoledContext, Item> extract(const Context& ctx, const Occurrence& occ);
/// extract followed by plug: Δ[I] ↦ Δ[filler].
Context replace(const Context& ctx, const Occurrence& occ, const Context& filler);
Context remove(const Context& ctx, const Occurrence& occ);

Context singleton(Item item);
Context concat(const Context& a, const Context& b);

/// Canonical presentation: items sorted recursively by (size, printed form).
Context canonical(const Context& ctx);
Item canonical(const Item& item);
Sequent canonical(const Sequent& s);
/// Canonical printed key of an item; equal keys iff equal as nested multisets.
std::string canonical_key(const Item& item);
std::string canonical_key(const Context& ctx);
std::string canonical_key(const Sequent& s);

/// Nested multiset equality.
bool equivalent(const Context& a, const Context& b);
bool equivalent(const Item& a, const Item& b);
bool equivalent(const Sequent& a, const Sequent& b);

/// Correspondence between two presentations of the same nested multiset.
struct ContextMap {
  std::vector<std::size_t> index;     // index[i] = position in the target
  std::vector<ContextMap> children;   // per source item (annotated only)

  std::size_t map_index(std::size_t i) const { return index.at(i); }
  Path map_level(const Path& p) const;
  Occurrence map_occurrence(const Occurrence& o) const;
};

/// Throws PathError if the contexts are not equivalent.
ContextMap match(const Context& from, const Context& to);

/// Flattens a context into a formula: ∧ of items, Γ^A as ◆_A(⋀Γ), ∅ as ⊤.
Formula translate(const Context& ctx);
Formula translate(const Item& item);

/// Atom and agent names occurring in a value, sorted and unique.
std::vector<std::string> atoms_of(const Formula& f);
std::vector<std::string> atoms_of(const Sequent& s);
std::vector<Agent> agents_of(const Formula& f);
std::vector<Agent> agents_of(const Sequent& s);

}  // namespace apml

#endif  // APML_SYNTAX_HPP
