#include "apml/search.hpp"

#include <algorithm>
#include <future>
#include <set>
#include <unordered_set>

#include "apml/print.hpp"
#include "json.hpp"

namespace apml {

namespace {

struct Level;

// Mirror of an Item that also carries search bookkeeping.
struct Node {
  bool annotated = false;
  Formula formula;
  Agent agent;
  std::vector<Level> inner;  // exactly one entry when annotated
};

// One nesting level. `had` lists every formula that has ever been present at
// this level, including ones already decomposed.
struct Level {
  std::vector<Node> items;
  std::vector<Formula> had;

  bool seen(const Formula& f) const { return std::find(had.begin(), had.end(), f) != had.end(); }
  void note(const Formula& f) {
    if (!seen(f)) had.push_back(f);
  }
  void prepend(Node n) {
    if (!n.annotated) note(n.formula);
    items.insert(items.begin(), std::move(n));
  }
};

Node formula_node(Formula f) {
  Node n;
  n.formula = std::move(f);
  return n;
}

Node annotated_node(Agent a, Level inner) {
  Node n;
  n.annotated = true;
  n.agent = std::move(a);
  n.inner.push_back(std::move(inner));
  return n;
}

Level from_context(const Context& ctx) {
  Level lv;
  for (const auto& item : ctx.items) {
    if (item.is_formula()) {
      lv.items.push_back(formula_node(item.formula()));
      lv.note(item.formula());
    } else {
      lv.items.push_back(annotated_node(item.agent(), from_context(item.context())));
    }
  }
  return lv;
}

Context to_context(const Level& lv) {
  Context ctx;
  ctx.items.reserve(lv.items.size());
  for (const auto& n : lv.items) {
    ctx.items.push_back(n.annotated ? Item::annotated(n.agent, to_context(n.inner.front()))
                                    : Item(n.formula));
  }
  return ctx;
}

Level& level_of(Level& root, const Path& p) {
  Level* cur = &root;
  for (std::size_t s : p.steps) cur = &cur->items[s].inner.front();
  return *cur;
}

struct Action {
  RuleApp app;
  Formula added;  // BoxL / Assn
};

class Prover {
 public:
  explicit Prover(const SearchConfig& config) : config_(config) {}

  Derivation run(const Sequent& s) {
    Level root = from_context(s.antecedent);
    std::vector<std::string> history;
    return solve(std::move(root), s.succedent, 0, 0, history);
  }

  SearchStats stats;

 private:
  bool out_of_budget() {
    if (config_.cancel != nullptr && config_.cancel->load(std::memory_order_relaxed)) {
      stats.cancelled = true;
      stats.bound_hit = true;
      return true;
    }
    if (stats.nodes >= config_.max_nodes) {
      stats.bound_hit = true;
      return true;
    }
    return false;
  }

  // First ⊥ anywhere.
  static std::optional<Occurrence> find_bot(const Level& lv, const Path& here) {
    for (std::size_t i = 0; i < lv.items.size(); ++i) {
      const Node& n = lv.items[i];
      if (!n.annotated && n.formula.is(FormulaKind::Bot)) return Occurrence{here, i};
      if (n.annotated) {
        if (auto o = find_bot(n.inner.front(), here.child(i))) return o;
      }
    }
    return std::nullopt;
  }

  static std::optional<Occurrence> find_decomposable(const Level& lv, const Path& here) {
    for (std::size_t i = 0; i < lv.items.size(); ++i) {
      const Node& n = lv.items[i];
      if (!n.annotated) {
        const auto k = n.formula.kind();
        if (k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Dia) return Occurrence{here, i};
      } else if (auto o = find_decomposable(n.inner.front(), here.child(i))) {
        return o;
      }
    }
    return std::nullopt;
  }

  // Assn first, then BoxL, each only when it adds a formula new to the level.
  std::optional<Action> find_addition(const Level& lv, const Path& here, bool allow_boxl) {
    for (std::size_t i = 0; i < lv.items.size(); ++i) {
      const Node& n = lv.items[i];
      if (!n.annotated) continue;
      const Level& in = n.inner.front();
      for (std::size_t j = 0; j < in.items.size(); ++j) {
        const Node& m = in.items[j];
        if (m.annotated || !m.formula.is(FormulaKind::Atom)) continue;
        for (const auto& a : config_.assumptions) {
          if (a.agent == n.agent && a.trigger == m.formula.name() && !lv.seen(a.consequent)) {
            return Action{RuleApp{RuleKind::Assn, Occurrence{here, i}, j, a}, a.consequent};
          }
        }
      }
    }
    if (allow_boxl) {
      for (std::size_t i = 0; i < lv.items.size(); ++i) {
        const Node& n = lv.items[i];
        if (!n.annotated) continue;
        const Level& in = n.inner.front();
        for (std::size_t j = 0; j < in.items.size(); ++j) {
          const Node& m = in.items[j];
          if (m.annotated || !m.formula.is(FormulaKind::Box) || m.formula.agent() != n.agent) continue;
          if (lv.seen(m.formula.body())) {
            ++stats.boxl_suppressed;
            continue;
          }
          return Action{RuleApp{RuleKind::BoxL, Occurrence{here, i}, j, std::nullopt}, m.formula.body()};
        }
      }
    }
    for (std::size_t i = 0; i < lv.items.size(); ++i) {
      const Node& n = lv.items[i];
      if (!n.annotated) continue;
      if (auto a = find_addition(n.inner.front(), here.child(i), allow_boxl)) return a;
    }
    return std::nullopt;
  }

  Derivation node(const Level& root, const Formula& succ, RuleApp app, std::vector<Derivation> prem) {
    return make_derivation(Sequent{to_context(root), succ}, std::move(app), std::move(prem));
  }

  Derivation solve(Level root, const Formula& succ, std::size_t depth, std::size_t boxl,
                   std::vector<std::string>& history) {
    ++stats.nodes;
    stats.max_depth_reached = std::max(stats.max_depth_reached, depth);
    if (out_of_budget()) return nullptr;

    if (succ.is(FormulaKind::Top)) return node(root, succ, RuleApp{RuleKind::TopR}, {});
    if (succ.is(FormulaKind::Atom)) {
      for (std::size_t i = 0; i < root.items.size(); ++i) {
        const Node& n = root.items[i];
        if (!n.annotated && n.formula == succ) {
          return node(root, succ, RuleApp{RuleKind::Id, Occurrence{Path{}, i}}, {});
        }
      }
    }
    if (auto bot = find_bot(root, Path{})) return node(root, succ, RuleApp{RuleKind::BotL, *bot}, {});

    if (depth >= config_.max_depth) {
      stats.bound_hit = true;
      return nullptr;
    }

    if (auto occ = find_decomposable(root, Path{})) {
      Level& lv = level_of(root, occ->level);
      const Formula f = lv.items[occ->index].formula;
      const RuleApp app{f.is(FormulaKind::And)   ? RuleKind::AndL
                        : f.is(FormulaKind::Or) ? RuleKind::OrL
                                                : RuleKind::DiaL,
                        *occ};
      if (f.is(FormulaKind::Or)) {
        Level left = root;
        Level right = root;
        for (auto [state, part] : {std::pair<Level*, Formula>{&left, f.left()}, {&right, f.right()}}) {
          Level& l = level_of(*state, occ->level);
          l.items.erase(l.items.begin() + static_cast<std::ptrdiff_t>(occ->index));
          l.prepend(formula_node(part));
        }
        Derivation dl = solve(std::move(left), succ, depth + 1, boxl, history);
        if (!dl) return nullptr;
        Derivation dr = solve(std::move(right), succ, depth + 1, boxl, history);
        if (!dr) return nullptr;
        return node(root, succ, app, {std::move(dl), std::move(dr)});
      }
      Level next = root;
      Level& l = level_of(next, occ->level);
      l.items.erase(l.items.begin() + static_cast<std::ptrdiff_t>(occ->index));
      if (f.is(FormulaKind::And)) {
        l.note(f.left());
        l.note(f.right());
        l.items.insert(l.items.begin(), {formula_node(f.left()), formula_node(f.right())});
      } else {
        Level inner;
        inner.prepend(formula_node(f.body()));
        l.items.insert(l.items.begin(), annotated_node(f.agent(), std::move(inner)));
      }
      Derivation d = solve(std::move(next), succ, depth + 1, boxl, history);
      if (!d) return nullptr;
      return node(root, succ, app, {std::move(d)});
    }

    const bool boxl_room = boxl < config_.max_boxl_per_branch;
    if (auto act = find_addition(root, Path{}, config_.duplicate_boxl_principal && boxl_room)) {
      Level next = root;
      level_of(next, act->app.principal.level).prepend(formula_node(act->added));
      const std::size_t used = boxl + (act->app.kind == RuleKind::BoxL ? 1 : 0);
      Derivation d = solve(std::move(next), succ, depth + 1, used, history);
      if (!d) return nullptr;
      return node(root, succ, act->app, {std::move(d)});
    }
    if (config_.duplicate_boxl_principal && !boxl_room) stats.bound_hit = true;

    if (succ.is(FormulaKind::And) && config_.duplicate_boxl_principal) {
      Derivation dl = solve(root, succ.left(), depth + 1, boxl, history);
      if (!dl) return nullptr;
      Derivation dr = solve(root, succ.right(), depth + 1, boxl, history);
      if (!dr) return nullptr;
      return node(root, succ, RuleApp{RuleKind::AndR}, {std::move(dl), std::move(dr)});
    }
    if (succ.is(FormulaKind::Box) && config_.duplicate_boxl_principal) {
      Level next;
      next.items.push_back(annotated_node(succ.agent(), root));
      Derivation d = solve(std::move(next), succ.body(), depth + 1, boxl, history);
      if (!d) return nullptr;
      return node(root, succ, RuleApp{RuleKind::BoxR}, {std::move(d)});
    }
    return choose(std::move(root), succ, depth, boxl, history);
  }

  // Non-invertible steps, tried with backtracking.
  Derivation choose(Level root, const Formula& succ, std::size_t depth, std::size_t boxl,
                    std::vector<std::string>& history) {
    std::string key;
    if (config_.loop_check) {
      key = canonical_key(Sequent{to_context(root), succ});
      if (std::find(history.begin(), history.end(), key) != history.end()) {
        ++stats.loop_prunes;
        return nullptr;
      }
      history.push_back(key);
    }
    Derivation found = try_choices(root, succ, depth, boxl, history);
    if (config_.loop_check) history.pop_back();
    return found;
  }

  Derivation try_choices(const Level& root, const Formula& succ, std::size_t depth, std::size_t boxl,
                         std::vector<std::string>& history) {
    if (!config_.duplicate_boxl_principal) {
      std::vector<std::pair<Occurrence, std::size_t>> sites;
      if (boxl < config_.max_boxl_per_branch) {
        collect_box_sites(root, Path{}, sites);
      } else {
        stats.bound_hit = true;
      }
      for (const auto& [occ, j] : sites) {
        Level next = root;
        Level& l = level_of(next, occ.level);
        const Formula body = l.items[occ.index].inner.front().items[j].formula.body();
        l.items.erase(l.items.begin() + static_cast<std::ptrdiff_t>(occ.index));
        l.prepend(formula_node(body));
        if (Derivation d = solve(std::move(next), succ, depth + 1, boxl + 1, history)) {
          return node(root, succ, RuleApp{RuleKind::BoxL, occ, j}, {std::move(d)});
        }
        if (stats.cancelled) return nullptr;
      }
      if (succ.is(FormulaKind::And)) {
        Derivation dl = solve(root, succ.left(), depth + 1, boxl, history);
        if (!dl) return nullptr;
        Derivation dr = solve(root, succ.right(), depth + 1, boxl, history);
        if (!dr) return nullptr;
        return node(root, succ, RuleApp{RuleKind::AndR}, {std::move(dl), std::move(dr)});
      }
      if (succ.is(FormulaKind::Box)) {
        Level next;
        next.items.push_back(annotated_node(succ.agent(), root));
        Derivation d = solve(std::move(next), succ.body(), depth + 1, boxl, history);
        if (!d) return nullptr;
        return node(root, succ, RuleApp{RuleKind::BoxR}, {std::move(d)});
      }
    }
    if (succ.is(FormulaKind::Or)) {
      if (Derivation d = solve(root, succ.left(), depth + 1, boxl, history)) {
        return node(root, succ, RuleApp{RuleKind::OrR1}, {std::move(d)});
      }
      if (stats.cancelled) return nullptr;
      if (Derivation d = solve(root, succ.right(), depth + 1, boxl, history)) {
        return node(root, succ, RuleApp{RuleKind::OrR2}, {std::move(d)});
      }
      return nullptr;
    }
    if (succ.is(FormulaKind::Dia)) {
      std::set<std::string> tried;
      for (std::size_t i = 0; i < root.items.size(); ++i) {
        const Node& n = root.items[i];
        if (!n.annotated || n.agent != succ.agent()) continue;
        if (!tried.insert(canonical_key(to_context(n.inner.front()))).second) continue;
        if (Derivation d = solve(n.inner.front(), succ.body(), depth + 1, boxl, history)) {
          return node(root, succ, RuleApp{RuleKind::DiaR, Occurrence{Path{}, i}}, {std::move(d)});
        }
        if (stats.cancelled) return nullptr;
      }
    }
    return nullptr;
  }

  void collect_box_sites(const Level& lv, const Path& here,
                         std::vector<std::pair<Occurrence, std::size_t>>& out) const {
    for (std::size_t i = 0; i < lv.items.size(); ++i) {
      const Node& n = lv.items[i];
      if (!n.annotated) continue;
      const Level& in = n.inner.front();
      for (std::size_t j = 0; j < in.items.size(); ++j) {
        const Node& m = in.items[j];
        if (!m.annotated && m.formula.is(FormulaKind::Box) && m.formula.agent() == n.agent) {
          out.emplace_back(Occurrence{here, i}, j);
        }
      }
      collect_box_sites(in, here.child(i), out);
    }
  }

  const SearchConfig& config_;
};

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved:
      return "Proved";
    case Verdict::Refuted:
      return "Refuted";
    case Verdict::NotProvedWithinBounds:
      break;
  }
  return "NotProvedWithinBounds";
}

SearchOutcome prove(const Sequent& s, const SearchConfig& config) {
  Prover prover(config);
  SearchOutcome out;
  out.derivation = prover.run(s);
  out.stats = prover.stats;
  out.verdict = out.derivation ? Verdict::Proved : Verdict::NotProvedWithinBounds;
  return out;
}

SearchOutcome decide(const Sequent& s, const SearchConfig& config, const CountermodelBounds& model_bounds) {
  std::atomic<bool> stop_prover{false};
  std::atomic<bool> stop_refuter{false};
  SearchConfig pc = config;
  pc.cancel = &stop_prover;
  auto proof = std::async(std::launch::async, [&] {
    SearchOutcome r = prove(s, pc);
    if (r.verdict == Verdict::Proved) stop_refuter.store(true);
    return r;
  });
  CountermodelBounds mb = model_bounds;
  mb.cancel = &stop_refuter;
  std::optional<Countermodel> model = find_countermodel(s, mb, config.assumptions);
  if (model) stop_prover.store(true);
  SearchOutcome out = proof.get();
  if (out.verdict == Verdict::Proved) {
    if (model) throw std::logic_error("sequent both proved and refuted: " + to_string(s));
    return out;
  }
  if (model) {
    out.verdict = Verdict::Refuted;
    out.countermodel = std::move(model);
  }
  return out;
}

std::string stats_to_json(const SearchStats& st) {
  nlohmann::json j;
  j["nodes"] = st.nodes;
  j["max_depth_reached"] = st.max_depth_reached;
  j["loop_prunes"] = st.loop_prunes;
  j["boxl_suppressed"] = st.boxl_suppressed;
  j["bound_hit"] = st.bound_hit;
  j["cancelled"] = st.cancelled;
  return j.dump();
}

}  // namespace apml
