#include "generators.hpp"

#include "apml/search.hpp"

namespace apml::testgen {

Generator::Generator(std::uint64_t seed, GenConfig config) : rng_(seed), config_(std::move(config)) {}

std::size_t Generator::below(std::size_t n) {
  if (n == 0) return 0;
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

Agent Generator::agent() { return Agent(config_.agents[below(config_.agents.size())]); }

Formula Generator::leaf() {
  if (chance(config_.constant_leaf)) return chance(0.5) ? Formula::top() : Formula::bot();
  return Formula::atom(config_.atoms[below(config_.atoms.size())]);
}

Formula Generator::formula(std::size_t budget) {
  if (budget == 0 || chance(0.25)) return leaf();
  const std::size_t op = below(budget >= 2 ? 4 : 2);
  if (op < 2) {
    const std::size_t rest = budget - 1;
    const std::size_t left = below(rest + 1);
    Formula a = formula(left);
    Formula b = formula(rest - left);
    return op == 0 ? Formula::conj(std::move(a), std::move(b)) : Formula::disj(std::move(a), std::move(b));
  }
  Formula body = formula(budget - 2);
  return op == 2 ? Formula::dia(agent(), std::move(body)) : Formula::box(agent(), std::move(body));
}

Context Generator::context(std::size_t items, std::size_t depth, std::size_t formula_budget) {
  Context ctx;
  const std::size_t n = items == 0 ? 0 : 1 + below(items);
  for (std::size_t i = 0; i < n; ++i) {
    if (depth > 0 && chance(0.3)) {
      Context inner = chance(0.1) ? Context{} : context(items, depth - 1, formula_budget);
      ctx.items.push_back(Item::annotated(agent(), std::move(inner)));
    } else {
      ctx.items.emplace_back(formula(below(formula_budget + 1)));
    }
  }
  return ctx;
}

Formula Generator::consequence_of_item(const Item& item, const Context& ctx, std::size_t budget) {
  if (item.is_annotated()) {
    if (budget < 2) return leaf();
    return Formula::dia(item.agent(), consequence(item.context(), budget - 2));
  }
  const Formula& f = item.formula();
  switch (f.kind()) {
    case FormulaKind::And:
      return consequence_of_item(Item(chance(0.5) ? f.left() : f.right()), ctx, budget);
    case FormulaKind::Or:
      if (f.size() <= budget) return f;
      return leaf();
    default:
      if (f.size() <= budget) return f;
      return leaf();
  }
}

Formula Generator::consequence(const Context& ctx, std::size_t budget) {
  if (ctx.items.empty()) return chance(0.5) ? Formula::top() : formula(budget);
  const std::size_t choice = below(6);
  if (choice == 0 && budget >= 1) {
    const std::size_t rest = budget - 1;
    const std::size_t left = below(rest + 1);
    return Formula::conj(consequence(ctx, left), consequence(ctx, rest - left));
  }
  if (choice == 1 && budget >= 1) {
    const std::size_t rest = budget - 1;
    const std::size_t left = below(rest + 1);
    Formula a = consequence(ctx, left);
    Formula b = formula(rest - left);
    return chance(0.5) ? Formula::disj(std::move(a), std::move(b)) : Formula::disj(std::move(b), std::move(a));
  }
  if (choice == 2 && budget >= 2) {
    const Agent a = agent();
    Context boxed = singleton(Item::annotated(a, ctx));
    // Bodies of boxes of that agent become available under the annotation.
    for (const Item& it : ctx.items) {
      if (it.is_formula() && it.formula().is(FormulaKind::Box) && it.formula().agent() == a) {
        boxed.items.emplace_back(it.formula().body());
      }
    }
    return Formula::box(a, consequence(boxed, budget - 2));
  }
  return consequence_of_item(ctx.items[below(ctx.items.size())], ctx, budget);
}

Sequent Generator::sequent(std::size_t ant_items, std::size_t depth, std::size_t budget) {
  Context ant = context(ant_items, depth, budget / 2 + 1);
  Formula succ = chance(0.8) ? consequence(ant, budget) : formula(budget);
  return Sequent{std::move(ant), std::move(succ)};
}

std::optional<Derivation> try_prove(const Sequent& s, std::size_t max_nodes, const Assumptions& assumptions) {
  SearchConfig config;
  config.assumptions = assumptions;
  config.max_nodes = max_nodes;
  config.max_depth = 80;
  config.max_boxl_per_branch = 24;
  SearchOutcome out = prove(s, config);
  if (out.verdict != Verdict::Proved) return std::nullopt;
  return out.derivation;
}

std::optional<Derivation> Generator::proof(std::size_t max_size, int attempts, std::size_t min_height,
                                           const Assumptions& assumptions) {
  for (int i = 0; i < attempts; ++i) {
    const std::size_t budget = max_size / 4 + below(std::max<std::size_t>(max_size / 2, 1));
    Sequent s = sequent(3, 2, budget);
    if (size(s) > max_size) continue;
    auto d = try_prove(s, 20000, assumptions);
    if (d && height(*d) >= min_height) return d;
  }
  return std::nullopt;
}

namespace {

void collect(const Context& ctx, const Path& at, std::vector<Occurrence>& occs, std::vector<Path>& levels) {
  levels.push_back(at);
  for (std::size_t i = 0; i < ctx.items.size(); ++i) {
    occs.push_back(Occurrence{at, i});
    if (ctx.items[i].is_annotated()) collect(ctx.items[i].context(), at.child(i), occs, levels);
  }
}

}  // namespace

std::vector<Occurrence> all_occurrences(const Context& ctx) {
  std::vector<Occurrence> occs;
  std::vector<Path> levels;
  collect(ctx, Path{}, occs, levels);
  return occs;
}

std::vector<Path> all_levels(const Context& ctx) {
  std::vector<Occurrence> occs;
  std::vector<Path> levels;
  collect(ctx, Path{}, occs, levels);
  return levels;
}

Path Generator::level(const Context& ctx) {
  auto levels = all_levels(ctx);
  return levels[below(levels.size())];
}

std::optional<Occurrence> Generator::occurrence(const Context& ctx) {
  auto occs = all_occurrences(ctx);
  if (occs.empty()) return std::nullopt;
  return occs[below(occs.size())];
}

}  // namespace apml::testgen
