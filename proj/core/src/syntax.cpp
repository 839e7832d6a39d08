#include "apml/syntax.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "apml/print.hpp"

namespace apml {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(FormulaKind kind, std::string name, Agent agent,
                      const Formula* left, const Formula* right) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->name = std::move(name);
  node->agent = std::move(agent);
  std::size_t h = mix(0, static_cast<std::size_t>(kind));
  h = mix(h, std::hash<std::string>{}(node->name));
  h = mix(h, std::hash<std::string>{}(node->agent.name));
  if (left != nullptr) {
    node->kids.push_back(*left);
    h = mix(h, left->hash());
  }
  if (right != nullptr) {
    node->kids.push_back(*right);
    h = mix(h, right->hash());
  }
  switch (kind) {
    case FormulaKind::And:
    case FormulaKind::Or:
      node->size = 1 + left->size() + right->size();
      break;
    case FormulaKind::Dia:
    case FormulaKind::Box:
      node->size = 2 + left->size();
      break;
    default:
      node->size = 0;
  }
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::bot() {
  static const Formula f = make(FormulaKind::Bot, "", Agent{}, nullptr, nullptr);
  return f;
}

Formula Formula::top() {
  static const Formula f = make(FormulaKind::Top, "", Agent{}, nullptr, nullptr);
  return f;
}

Formula::Formula() : Formula(top()) {}

Formula Formula::atom(std::string name) {
  return make(FormulaKind::Atom, std::move(name), Agent{}, nullptr, nullptr);
}

Formula Formula::conj(Formula left, Formula right) {
  return make(FormulaKind::And, "", Agent{}, &left, &right);
}

Formula Formula::disj(Formula left, Formula right) {
  return make(FormulaKind::Or, "", Agent{}, &left, &right);
}

Formula Formula::dia(Agent agent, Formula body) {
  return make(FormulaKind::Dia, "", std::move(agent), &body, nullptr);
}

Formula Formula::box(Agent agent, Formula body) {
  return make(FormulaKind::Box, "", std::move(agent), &body, nullptr);
}

const Formula& Formula::left() const {
  if (node_->kids.empty()) throw std::logic_error("formula has no subformula");
  return node_->kids.front();
}

const Formula& Formula::right() const {
  if (node_->kids.size() < 2) throw std::logic_error("formula has no right subformula");
  return node_->kids[1];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
  if (a.node_->kind != b.node_->kind || a.node_->name != b.node_->name ||
      a.node_->agent != b.node_->agent) {
    return false;
  }
  return a.node_->kids == b.node_->kids;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
  if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
  if (auto c = a.node_->agent <=> b.node_->agent; c != 0) return c;
  return std::lexicographical_compare_three_way(a.node_->kids.begin(), a.node_->kids.end(),
                                                b.node_->kids.begin(), b.node_->kids.end());
}

bool Context::empty() const { return items.empty(); }
std::size_t Context::count() const { return items.size(); }

Item Item::formula(Formula f) { return Item(std::move(f)); }

Item Item::annotated(Agent agent, Context context) {
  Item item;
  item.annotated_ = true;
  item.agent_ = std::move(agent);
  item.context_ = std::move(context);
  return item;
}

Item::Item(Formula f) : formula_(std::move(f)) {}

bool operator==(const Item& a, const Item& b) {
  if (a.annotated_ != b.annotated_) return false;
  if (!a.annotated_) return a.formula_ == b.formula_;
  return a.agent_ == b.agent_ && a.context_ == b.context_;
}

bool operator==(const Context& a, const Context& b) { return a.items == b.items; }

Path Path::child(std::size_t index) const {
  Path p = *this;
  p.steps.push_back(index);
  return p;
}

bool Path::is_prefix_of(const Path& other) const {
  return steps.size() <= other.steps.size() &&
         std::equal(steps.begin(), steps.end(), other.steps.begin());
}

std::size_t size(const Formula& f) { return f.size(); }

std::size_t size(const Item& item) {
  return item.is_formula() ? item.formula().size() : size(item.context()) + 1;
}

std::size_t size(const Context& ctx) {
  std::size_t total = 0;
  for (const auto& item : ctx.items) total += size(item);
  return total;
}

std::size_t size(const Sequent& s) { return size(s.antecedent) + size(s.succedent); }

const Context& level_at(const Context& ctx, const Path& path) {
  const Context* cur = &ctx;
  for (std::size_t step : path.steps) {
    if (step >= cur->items.size() || !cur->items[step].is_annotated()) {
      throw PathError("path does not address a nesting level");
    }
    cur = &cur->items[step].context();
  }
  return *cur;
}

Context& level_at(Context& ctx, const Path& path) {
  Context* cur = &ctx;
  for (std::size_t step : path.steps) {
    if (step >= cur->items.size() || !cur->items[step].is_annotated()) {
      throw PathError("path does not address a nesting level");
    }
    cur = &cur->items[step].context();
  }
  return *cur;
}

bool valid_level(const Context& ctx, const Path& path) {
  const Context* cur = &ctx;
  for (std::size_t step : path.steps) {
    if (step >= cur->items.size() || !cur->items[step].is_annotated()) return false;
    cur = &cur->items[step].context();
  }
  return true;
}

bool valid_occurrence(const Context& ctx, const Occurrence& occ) {
  return valid_level(ctx, occ.level) && occ.index < level_at(ctx, occ.level).items.size();
}

const Item& item_at(const Context& ctx, const Occurrence& occ) {
  const Context& level = level_at(ctx, occ.level);
  if (occ.index >= level.items.size()) throw PathError("occurrence index out of range");
  return level.items[occ.index];
}

Context plug(const Context& ctx, const Path& hole, const Context& filler) {
  Context out = ctx;
  Context& level = level_at(out, hole);
  level.items.insert(level.items.begin(), filler.items.begin(), filler.items.end());
  return out;
}

Path combine(const Path& outer, const Path& inner) {
  Path p = outer;
  p.steps.insert(p.steps.end(), inner.steps.begin(), inner.steps.end());
  return p;
}

Context apply(const HoledContext& delta, const Context& filler) {
  return plug(delta.surround, delta.hole, filler);
}

HoledContext combine(const HoledContext& outer, const HoledContext& inner) {
  return HoledContext{plug(outer.surround, outer.hole, inner.surround),
                      combine(outer.hole, inner.hole)};
}

std::pair<HoledContext, Item> extract(const Context& ctx, const Occurrence& occ) {
  Context out = ctx;
  Context& level = level_at(out, occ.level);
  if (occ.index >= level.items.size()) throw PathError("occurrence index out of range");
  Item item = std::move(level.items[occ.index]);
  level.items.erase(level.items.begin() + static_cast<std::ptrdiff_t>(occ.index));
  return {HoledContext{std::move(out), occ.level}, std::move(item)};
}

Context replace(const Context& ctx, const Occurrence& occ, const Context& filler) {
  return apply(extract(ctx, occ).first, filler);
}

Context remove(const Context& ctx, const Occurrence& occ) {
  return extract(ctx, occ).first.surround;
}

Context singleton(Item item) {
  Context c;
  c.items.push_back(std::move(item));
  return c;
}

Context concat(const Context& a, const Context& b) {
  Context c = a;
  c.items.insert(c.items.end(), b.items.begin(), b.items.end());
  return c;
}

namespace {

struct Keyed {
  Item item;
  std::size_t size = 0;
  std::string key;
};

bool keyed_less(const Keyed& a, const Keyed& b) {
  return std::tie(a.size, a.key) < std::tie(b.size, b.key);
}

Keyed canon_item(const Item& item);

std::pair<Context, std::string> canon_context(const Context& ctx) {
  std::vector<Keyed> keyed;
  keyed.reserve(ctx.items.size());
  for (const auto& item : ctx.items) keyed.push_back(canon_item(item));
  std::stable_sort(keyed.begin(), keyed.end(), keyed_less);
  Context out;
  std::string key;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i != 0) key += ", ";
    key += keyed[i].key;
    out.items.push_back(std::move(keyed[i].item));
  }
  return {std::move(out), std::move(key)};
}

Keyed canon_item(const Item& item) {
  if (item.is_formula()) return Keyed{item, item.formula().size(), to_string(item.formula())};
  auto [ctx, key] = canon_context(item.context());
  std::size_t sz = size(ctx) + 1;
  return Keyed{Item::annotated(item.agent(), std::move(ctx)), sz,
               "(" + key + ")^" + item.agent().name};
}

}  // namespace

Context canonical(const Context& ctx) { return canon_context(ctx).first; }
Item canonical(const Item& item) { return canon_item(item).item; }
Sequent canonical(const Sequent& s) { return Sequent{canonical(s.antecedent), s.succedent}; }

std::string canonical_key(const Item& item) { return canon_item(item).key; }
std::string canonical_key(const Context& ctx) { return canon_context(ctx).second; }
std::string canonical_key(const Sequent& s) { return to_string(s); }

bool equivalent(const Context& a, const Context& b) {
  if (a.items.size() != b.items.size()) return false;
  return canonical_key(a) == canonical_key(b);
}

bool equivalent(const Item& a, const Item& b) { return canonical_key(a) == canonical_key(b); }

bool equivalent(const Sequent& a, const Sequent& b) {
  return a.succedent == b.succedent && equivalent(a.antecedent, b.antecedent);
}

Path ContextMap::map_level(const Path& p) const {
  Path out;
  const ContextMap* m = this;
  for (std::size_t step : p.steps) {
    out.steps.push_back(m->index.at(step));
    m = &m->children.at(step);
  }
  return out;
}

Occurrence ContextMap::map_occurrence(const Occurrence& o) const {
  Occurrence out;
  const ContextMap* m = this;
  for (std::size_t step : o.level.steps) {
    out.level.steps.push_back(m->index.at(step));
    m = &m->children.at(step);
  }
  out.index = m->index.at(o.index);
  return out;
}

ContextMap match(const Context& from, const Context& to) {
  if (from.items.size() != to.items.size()) throw PathError("contexts differ in item count");
  std::vector<std::string> to_keys;
  to_keys.reserve(to.items.size());
  for (const auto& item : to.items) to_keys.push_back(canonical_key(item));
  std::vector<bool> used(to.items.size(), false);
  ContextMap map;
  map.index.resize(from.items.size());
  map.children.resize(from.items.size());
  for (std::size_t i = 0; i < from.items.size(); ++i) {
    const std::string key = canonical_key(from.items[i]);
    bool found = false;
    for (std::size_t j = 0; j < to.items.size(); ++j) {
      if (used[j] || to_keys[j] != key) continue;
      used[j] = true;
      map.index[i] = j;
      if (from.items[i].is_annotated()) {
        map.children[i] = match(from.items[i].context(), to.items[j].context());
      }
      found = true;
      break;
    }
    if (!found) throw PathError("contexts are not equal as multisets");
  }
  return map;
}

Formula translate(const Item& item) {
  if (item.is_formula()) return item.formula();
  return Formula::dia(item.agent(), translate(item.context()));
}

Formula translate(const Context& ctx) {
  if (ctx.items.empty()) return Formula::top();
  Formula acc = translate(ctx.items.back());
  for (std::size_t i = ctx.items.size() - 1; i-- > 0;) {
    acc = Formula::conj(translate(ctx.items[i]), acc);
  }
  return acc;
}

namespace {

void collect(const Formula& f, std::set<std::string>& atoms, std::set<Agent>& agents) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      atoms.insert(f.name());
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      collect(f.left(), atoms, agents);
      collect(f.right(), atoms, agents);
      break;
    case FormulaKind::Dia:
    case FormulaKind::Box:
      agents.insert(f.agent());
      collect(f.body(), atoms, agents);
      break;
    default:
      break;
  }
}

void collect(const Context& c, std::set<std::string>& atoms, std::set<Agent>& agents) {
  for (const auto& item : c.items) {
    if (item.is_formula()) {
      collect(item.formula(), atoms, agents);
    } else {
      agents.insert(item.agent());
      collect(item.context(), atoms, agents);
    }
  }
}

}  // namespace

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> atoms;
  std::set<Agent> agents;
  collect(f, atoms, agents);
  return {atoms.begin(), atoms.end()};
}

std::vector<std::string> atoms_of(const Sequent& s) {
  std::set<std::string> atoms;
  std::set<Agent> agents;
  collect(s.antecedent, atoms, agents);
  collect(s.succedent, atoms, agents);
  return {atoms.begin(), atoms.end()};
}

std::vector<Agent> agents_of(const Formula& f) {
  std::set<std::string> atoms;
  std::set<Agent> agents;
  collect(f, atoms, agents);
  return {agents.begin(), agents.end()};
}

std::vector<Agent> agents_of(const Sequent& s) {
  std::set<std::string> atoms;
  std::set<Agent> agents;
  collect(s.antecedent, atoms, agents);
  collect(s.succedent, atoms, agents);
  return {agents.begin(), agents.end()};
}

}  // namespace apml
