#include "apml/transform.hpp"

#include <algorithm>
#include <optional>

#include "apml/print.hpp"

namespace apml {

namespace {

// ---------------------------------------------------------------------------
// Position bookkeeping.
//
// A Shift describes how one level of a context changes when an item is
// removed from it and `added` items are put in front. Every other level keeps
// its item order, but paths that pass through the changed level are renumbered.

struct Shift {
  Path level;
  std::optional<std::size_t> removed;
  std::size_t added = 0;
};

std::optional<std::size_t> shift_index(std::size_t j, const Shift& s) {
  if (s.removed) {
    if (j == *s.removed) return std::nullopt;
    if (j > *s.removed) --j;
  }
  return j + s.added;
}

std::optional<Path> shift_path(const Path& p, const Shift& s) {
  if (p.depth() <= s.level.depth() || !s.level.is_prefix_of(p)) return p;
  const auto mapped = shift_index(p.steps[s.level.depth()], s);
  if (!mapped) return std::nullopt;
  Path out = p;
  out.steps[s.level.depth()] = *mapped;
  return out;
}

std::optional<Occurrence> shift_occ(const Occurrence& o, const Shift& s) {
  if (o.level == s.level) {
    const auto mapped = shift_index(o.index, s);
    if (!mapped) return std::nullopt;
    return Occurrence{o.level, *mapped};
  }
  const auto level = shift_path(o.level, s);
  if (!level) return std::nullopt;
  return Occurrence{*level, o.index};
}

Occurrence must(const std::optional<Occurrence>& o) {
  if (!o) throw std::logic_error("position vanished under a rule edit");
  return *o;
}

Path suffix(const Path& p, std::size_t from) {
  return Path(std::vector<std::size_t>(p.steps.begin() + static_cast<std::ptrdiff_t>(from), p.steps.end()));
}

Path prefixed(std::size_t step, const Path& p) {
  Path out{step};
  out.steps.insert(out.steps.end(), p.steps.begin(), p.steps.end());
  return out;
}

/// How positions of a conclusion move into one premiss.
struct Edit {
  enum Kind { Same, Move, Wrap, Focus } kind = Same;
  Shift shift;
  std::size_t focus = 0;
};

Edit premiss_edit(const RuleApp& app) {
  const Occurrence& p = app.principal;
  switch (app.kind) {
    case RuleKind::AndL:
      return {Edit::Move, Shift{p.level, p.index, 2}, 0};
    case RuleKind::OrL:
    case RuleKind::DiaL:
      return {Edit::Move, Shift{p.level, p.index, 1}, 0};
    case RuleKind::BoxL:
    case RuleKind::Assn:
      return {Edit::Move, Shift{p.level, std::nullopt, 1}, 0};
    case RuleKind::BoxR:
      return {Edit::Wrap, {}, 0};
    case RuleKind::DiaR:
      return {Edit::Focus, {}, p.index};
    default:
      return {};
  }
}

std::optional<Occurrence> map_occ(const Edit& e, const Occurrence& o) {
  switch (e.kind) {
    case Edit::Same:
      return o;
    case Edit::Move:
      return shift_occ(o, e.shift);
    case Edit::Wrap:
      return Occurrence{prefixed(0, o.level), o.index};
    case Edit::Focus:
      if (o.level.empty() || o.level.steps[0] != e.focus) return std::nullopt;
      return Occurrence{suffix(o.level, 1), o.index};
  }
  return std::nullopt;
}

std::optional<Path> map_level(const Edit& e, const Path& p) {
  switch (e.kind) {
    case Edit::Same:
      return p;
    case Edit::Move:
      return shift_path(p, e.shift);
    case Edit::Wrap:
      return prefixed(0, p);
    case Edit::Focus:
      if (p.empty() || p.steps[0] != e.focus) return std::nullopt;
      return suffix(p, 1);
  }
  return std::nullopt;
}

bool has_principal(RuleKind k) {
  switch (k) {
    case RuleKind::TopR:
    case RuleKind::AndR:
    case RuleKind::OrR1:
    case RuleKind::OrR2:
    case RuleKind::BoxR:
    case RuleKind::Cut:
      return false;
    default:
      return true;
  }
}

/// Instance data re-expressed after a Shift of the conclusion.
RuleApp map_app(RuleApp app, const Shift& s) {
  if (!has_principal(app.kind)) return app;
  if (app.kind == RuleKind::BoxL || app.kind == RuleKind::Assn) {
    const Occurrence inner = must(shift_occ(Occurrence{app.principal.inside(), app.inner}, s));
    app.principal = must(shift_occ(app.principal, s));
    app.inner = inner.index;
    return app;
  }
  app.principal = must(shift_occ(app.principal, s));
  return app;
}

RuleApp with_level_prefix(RuleApp app, std::size_t step) {
  if (has_principal(app.kind)) app.principal.level = prefixed(step, app.principal.level);
  return app;
}

void require_cut_free(const Derivation& d, const char* what) {
  if (!d) throw TransformError(std::string(what) + ": null derivation");
  if (!cut_free(d)) throw TransformError(std::string(what) + ": input contains a cut");
}

/// Premisses re-presented in the order premisses_of produces, so that mapped
/// positions address them directly.
std::vector<Derivation> aligned_premisses(const Derivation& d) {
  if (d->rule.kind == RuleKind::Cut) throw TransformError("unexpected cut node");
  const std::vector<Sequent> expected = premisses_of(d->conclusion, d->rule);
  if (expected.size() != d->premisses.size()) throw TransformError("malformed derivation node");
  std::vector<Derivation> out;
  out.reserve(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    out.push_back(realign(d->premisses[i], expected[i].antecedent));
  }
  return out;
}

Derivation node(Sequent conclusion, RuleApp app, std::vector<Derivation> premisses = {}) {
  return make_derivation(std::move(conclusion), std::move(app), std::move(premisses));
}

const Formula& formula_item(const Context& ctx, const Occurrence& occ, FormulaKind kind, const char* what) {
  if (!valid_occurrence(ctx, occ)) throw TransformError(std::string(what) + ": invalid occurrence");
  const Item& it = item_at(ctx, occ);
  if (!it.is_formula() || !it.formula().is(kind)) {
    throw TransformError(std::string(what) + ": occurrence does not hold the expected formula");
  }
  return it.formula();
}

// ---------------------------------------------------------------------------
// Weakening.

Derivation weaken_rec(const Derivation& d, const Path& level, const Context& extra) {
  const Sequent& c = d->conclusion;
  Sequent target{plug(c.antecedent, level, extra), c.succedent};
  const RuleApp& app = d->rule;
  if (app.kind == RuleKind::Cut) throw TransformError("weaken: input contains a cut");

  if (app.kind == RuleKind::DiaR) {
    const std::size_t k = app.principal.index;
    if (level.empty()) {
      RuleApp moved = app;
      moved.principal.index = k + extra.items.size();
      return node(std::move(target), std::move(moved), d->premisses);
    }
    if (level.steps[0] != k) return node(std::move(target), app, d->premisses);
    auto prem = aligned_premisses(d);
    return node(std::move(target), app, {weaken_rec(prem[0], suffix(level, 1), extra)});
  }

  const Shift sh{level, std::nullopt, extra.items.size()};
  const Edit e = premiss_edit(app);
  std::vector<Derivation> out;
  for (const Derivation& p : aligned_premisses(d)) {
    const auto inner = map_level(e, level);
    if (!inner) throw std::logic_error("weakening level vanished");
    out.push_back(weaken_rec(p, *inner, extra));
  }
  return node(std::move(target), map_app(app, sh), std::move(out));
}

// ---------------------------------------------------------------------------
// Substituting a context for a formula occurrence that no rule decomposes,
// except possibly the inverted rule itself.

struct Substitution {
  RuleKind inverted;  // Cut stands for "none"
  std::size_t side;
};

Derivation substitute_rec(const Derivation& d, const Occurrence& occ, const Context& filler,
                          const Substitution& sub) {
  const Sequent& c = d->conclusion;
  const RuleApp& app = d->rule;
  if (app.kind == RuleKind::Cut) throw TransformError("inversion: input contains a cut");
  if (app.kind == sub.inverted && app.principal == occ) {
    return aligned_premisses(d).at(sub.side);
  }
  Sequent target{replace(c.antecedent, occ, filler), c.succedent};

  if (app.kind == RuleKind::DiaR) {
    const std::size_t k = app.principal.index;
    if (occ.level.empty()) {
      const Shift sh{Path{}, occ.index, filler.items.size()};
      return node(std::move(target), map_app(app, sh), d->premisses);
    }
    if (occ.level.steps[0] != k) return node(std::move(target), app, d->premisses);
    auto prem = aligned_premisses(d);
    const Occurrence inner{suffix(occ.level, 1), occ.index};
    return node(std::move(target), app, {substitute_rec(prem[0], inner, filler, sub)});
  }

  const Shift sh{occ.level, occ.index, filler.items.size()};
  const Edit e = premiss_edit(app);
  std::vector<Derivation> out;
  for (const Derivation& p : aligned_premisses(d)) {
    out.push_back(substitute_rec(p, must(map_occ(e, occ)), filler, sub));
  }
  return node(std::move(target), map_app(app, sh), std::move(out));
}

Derivation invert_box_right_rec(const Derivation& d, const Agent& agent) {
  const Sequent& c = d->conclusion;
  const RuleApp& app = d->rule;
  if (app.kind == RuleKind::BoxR) return aligned_premisses(d)[0];
  Sequent target{singleton(Item::annotated(agent, c.antecedent)), c.succedent.body()};
  switch (app.kind) {
    case RuleKind::BotL:
    case RuleKind::AndL:
    case RuleKind::OrL:
    case RuleKind::DiaL:
    case RuleKind::BoxL:
    case RuleKind::Assn: {
      std::vector<Derivation> out;
      for (const Derivation& p : aligned_premisses(d)) out.push_back(invert_box_right_rec(p, agent));
      return node(std::move(target), with_level_prefix(app, 0), std::move(out));
    }
    default:
      throw TransformError("box-right inversion: unexpected rule " + std::string(rule_name(app.kind)));
  }
}

Derivation invert_and_right_rec(const Derivation& d, std::size_t side) {
  const Sequent& c = d->conclusion;
  const RuleApp& app = d->rule;
  if (app.kind == RuleKind::AndR) return aligned_premisses(d)[side];
  Sequent target{c.antecedent, side == 0 ? c.succedent.left() : c.succedent.right()};
  switch (app.kind) {
    case RuleKind::BotL:
    case RuleKind::AndL:
    case RuleKind::OrL:
    case RuleKind::DiaL:
    case RuleKind::BoxL:
    case RuleKind::Assn: {
      std::vector<Derivation> out;
      for (const Derivation& p : aligned_premisses(d)) out.push_back(invert_and_right_rec(p, side));
      return node(std::move(target), app, std::move(out));
    }
    default:
      throw TransformError("and-right inversion: unexpected rule " + std::string(rule_name(app.kind)));
  }
}

// ---------------------------------------------------------------------------
// Item contraction, by induction on height. Weakening and the inversions
// preserve height, so every recursive call is on a strictly lower derivation.

enum class Rel { At, Inside, Outside };

Rel relation(const Occurrence& x, const Occurrence& copy) {
  if (x == copy) return Rel::At;
  if (copy.inside().is_prefix_of(x.level)) return Rel::Inside;
  return Rel::Outside;
}

/// Position at or inside copy `from`, carried to the matching position of `to`.
Occurrence transfer(const Context& ant, const Occurrence& x, const Occurrence& from, const Occurrence& to) {
  if (x == from) return to;
  const ContextMap cm = match(item_at(ant, from).context(), item_at(ant, to).context());
  const Occurrence rel{suffix(x.level, from.inside().depth()), x.index};
  const Occurrence mapped = cm.map_occurrence(rel);
  return Occurrence{combine(to.inside(), mapped.level), mapped.index};
}

Derivation contract_rec(const Derivation& d, const Path& level, std::size_t keep, std::size_t drop);

Derivation contract_swapped(const Derivation& d, const Path& level, std::size_t keep, std::size_t drop) {
  const Context target = remove(d->conclusion.antecedent, Occurrence{level, drop});
  return realign(contract_rec(d, level, drop, keep), target);
}

Derivation contract_rec(const Derivation& d, const Path& level, std::size_t keep, std::size_t drop) {
  const Sequent& c = d->conclusion;
  const Occurrence ek{level, keep};
  const Occurrence ed{level, drop};
  Sequent target{remove(c.antecedent, ed), c.succedent};
  const Shift sh{level, drop, 0};
  RuleApp app = d->rule;

  switch (app.kind) {
    case RuleKind::Cut:
      throw TransformError("contraction: input contains a cut");
    case RuleKind::TopR:
      return node(std::move(target), app);
    case RuleKind::Id:
    case RuleKind::BotL:
      if (relation(app.principal, ed) != Rel::Outside) {
        app.principal = transfer(c.antecedent, app.principal, ed, ek);
      }
      return node(std::move(target), map_app(app, sh));
    case RuleKind::DiaR: {
      const std::size_t k = app.principal.index;
      if (level.empty()) {
        if (k == drop) app.principal.index = keep;
        return node(std::move(target), map_app(app, sh), d->premisses);
      }
      if (level.steps[0] != k) return node(std::move(target), app, d->premisses);
      auto prem = aligned_premisses(d);
      return node(std::move(target), app, {contract_rec(prem[0], suffix(level, 1), keep, drop)});
    }
    case RuleKind::AndL:
    case RuleKind::OrL:
    case RuleKind::DiaL: {
      const Occurrence& x = app.principal;
      if (relation(x, ed) != Rel::Outside) return contract_swapped(d, level, keep, drop);
      const Rel rk = relation(x, ek);
      if (rk == Rel::Outside) break;
      const auto prem = aligned_premisses(d);
      const Edit e = premiss_edit(app);
      std::vector<Derivation> out;
      if (rk == Rel::At) {
        // The kept copy is decomposed: decompose the other copy the same way,
        // then contract the components pairwise.
        const std::size_t n = app.kind == RuleKind::AndL ? 2 : 1;
        for (std::size_t i = 0; i < prem.size(); ++i) {
          const Occurrence md = must(map_occ(e, ed));
          const Context filler(Context{std::vector<Item>(
              level_at(prem[i]->conclusion.antecedent, level).items.begin(),
              level_at(prem[i]->conclusion.antecedent, level).items.begin() + static_cast<std::ptrdiff_t>(n))});
          Derivation cur = substitute_rec(prem[i], md, filler, Substitution{app.kind, i});
          for (std::size_t t = n; t-- > 0;) cur = contract_rec(cur, level, t, n + t);
          out.push_back(cur);
        }
      } else {
        const Occurrence xd = transfer(c.antecedent, x, ek, ed);
        for (std::size_t i = 0; i < prem.size(); ++i) {
          const Context& lv = level_at(prem[i]->conclusion.antecedent, x.level);
          const std::size_t n = app.kind == RuleKind::AndL ? 2 : 1;
          const Context filler{std::vector<Item>(lv.items.begin(),
                                                 lv.items.begin() + static_cast<std::ptrdiff_t>(n))};
          Derivation cur = substitute_rec(prem[i], xd, filler, Substitution{app.kind, i});
          out.push_back(contract_rec(cur, level, keep, drop));
        }
      }
      return node(std::move(target), map_app(app, sh), std::move(out));
    }
    case RuleKind::BoxL:
    case RuleKind::Assn: {
      if (Occurrence{app.principal.inside(), app.inner} == ed) app.inner = keep;
      const Rel rd = relation(app.principal, ed);
      if (rd == Rel::Inside) return contract_swapped(d, level, keep, drop);
      if (rd == Rel::At) {
        const Occurrence inner = transfer(c.antecedent, Occurrence{ed.inside(), app.inner}, ed, ek);
        app.principal = ek;
        app.inner = inner.index;
      }
      if (relation(app.principal, ek) != Rel::Inside) break;
      // The added formula lands inside the kept copy; add it to the other too.
      const auto prem = aligned_premisses(d);
      const Occurrence xd = transfer(c.antecedent, app.principal, ek, ed);
      const Context added = singleton(level_at(prem[0]->conclusion.antecedent, app.principal.level).items[0]);
      Derivation cur = weaken_rec(prem[0], xd.level, added);
      return node(std::move(target), map_app(app, sh), {contract_rec(cur, level, keep, drop)});
    }
    default:
      break;
  }

  const Edit e = premiss_edit(app);
  const std::vector<Derivation> prem = aligned_premisses(d);
  std::vector<Derivation> out;
  for (const Derivation& p : prem) {
    const auto mk = map_occ(e, ek);
    const auto md = map_occ(e, ed);
    if (!mk || !md || mk->level != md->level) throw std::logic_error("contraction copies separated");
    out.push_back(contract_rec(p, mk->level, mk->index, md->index));
  }
  return node(std::move(target), map_app(app, sh), std::move(out));
}

// ---------------------------------------------------------------------------
// Cut elimination.

using Rank = std::pair<std::size_t, std::size_t>;

class CutEngine {
 public:
  CutEngine(const CutOptions& options, CutReport* report) : options_(options), report_(report) {}

  Derivation run(const Derivation& d1, const Derivation& d2, const Occurrence& occ) {
    return cut(d1, d2, occ, std::nullopt);
  }

 private:
  void label(const char* l) {
    if (report_) report_->labels.emplace_back(l);
  }

  Derivation cut(const Derivation& d1, const Derivation& d2, const Occurrence& occ,
                 const std::optional<Rank>& parent) {
    const Formula& m = d1->conclusion.succedent;
    const Rank rank{m.size(), d1->height + d2->height};
    if (parent) {
      if (report_) ++report_->rank_checks;
      if (!(rank < *parent)) {
        throw TransformError("cut elimination: rank did not descend at " + to_string(d2->conclusion));
      }
    }
    if (depth_ >= options_.max_depth) throw TransformError("cut elimination: depth limit exceeded");
    ++depth_;
    if (report_) {
      ++report_->calls;
      report_->max_depth = std::max(report_->max_depth, depth_);
    }
    Derivation out = reduce(d1, d2, occ, rank);
    --depth_;
    return out;
  }

  Derivation reduce(const Derivation& d1, const Derivation& d2, const Occurrence& occ, const Rank& rank) {
    const Context& gamma = d1->conclusion.antecedent;
    const Sequent& c2 = d2->conclusion;
    Sequent target{replace(c2.antecedent, occ, gamma), c2.succedent};
    const RuleApp& app = d1->rule;
    const Path& at = occ.level;

    switch (app.kind) {
      case RuleKind::Id: {
        label("(i)");
        Derivation w = weaken_rec(d2, at, remove(gamma, app.principal));
        return realign(w, target.antecedent);
      }
      case RuleKind::BotL: {
        label("(ii)");
        RuleApp moved = app;
        moved.principal.level = combine(at, app.principal.level);
        return node(std::move(target), std::move(moved));
      }
      case RuleKind::TopR:
        label("(iii)");
        return substitute_rec(d2, occ, gamma, Substitution{RuleKind::Cut, 0});
      case RuleKind::AndL:
      case RuleKind::OrL:
      case RuleKind::DiaL:
      case RuleKind::BoxL:
      case RuleKind::Assn: {
        label(app.kind == RuleKind::AndL   ? "(iv)"
              : app.kind == RuleKind::OrL  ? "(v)"
              : app.kind == RuleKind::DiaL ? "(vi)"
              : app.kind == RuleKind::BoxL ? "(vii)"
                                           : "(xii)");
        std::vector<Derivation> out;
        for (const Derivation& p : aligned_premisses(d1)) out.push_back(cut(p, d2, occ, rank));
        RuleApp moved = app;
        moved.principal.level = combine(at, app.principal.level);
        return node(std::move(target), std::move(moved), std::move(out));
      }
      case RuleKind::AndR: {
        label("(viii)");
        const auto prem = aligned_premisses(d1);
        const Derivation inv = substitute_rec(
            d2, occ, Context{{Item(c2_formula(d2, occ).left()), Item(c2_formula(d2, occ).right())}},
            Substitution{RuleKind::AndL, 0});
        const Derivation first = cut(prem[0], inv, Occurrence{at, 0}, rank);
        const std::size_t g = gamma.items.size();
        const Derivation second = cut(prem[1], first, Occurrence{at, g}, rank);
        Derivation cur = second;
        for (std::size_t t = g; t-- > 0;) cur = contract_rec(cur, at, t, g + t);
        return realign(cur, target.antecedent);
      }
      case RuleKind::OrR1:
      case RuleKind::OrR2: {
        label("(ix)");
        const std::size_t side = app.kind == RuleKind::OrR1 ? 0 : 1;
        const Formula& disj = c2_formula(d2, occ);
        const Formula& chosen = side == 0 ? disj.left() : disj.right();
        const Derivation inv =
            substitute_rec(d2, occ, singleton(chosen), Substitution{RuleKind::OrL, side});
        const Derivation r = cut(aligned_premisses(d1)[0], inv, Occurrence{at, 0}, rank);
        return realign(r, target.antecedent);
      }
      case RuleKind::DiaR: {
        label("(x)");
        const Formula& dia = c2_formula(d2, occ);
        const Derivation inv = substitute_rec(
            d2, occ, singleton(Item::annotated(dia.agent(), singleton(dia.body()))),
            Substitution{RuleKind::DiaL, 0});
        const Derivation r = cut(aligned_premisses(d1)[0], inv, Occurrence{at.child(0), 0}, rank);
        const Derivation w = weaken_rec(r, at, remove(gamma, app.principal));
        return realign(w, target.antecedent);
      }
      case RuleKind::BoxR:
        return reduce_box_right(d1, d2, occ, rank, std::move(target));
      case RuleKind::Cut:
        throw TransformError("cut elimination: first premiss contains a cut");
    }
    throw std::logic_error("unreachable rule kind");
  }

  static const Formula& c2_formula(const Derivation& d2, const Occurrence& occ) {
    return item_at(d2->conclusion.antecedent, occ).formula();
  }

  /// First premiss ends in BoxR: dispatch on the second premiss.
  Derivation reduce_box_right(const Derivation& d1, const Derivation& d2, const Occurrence& occ,
                              const Rank& rank, Sequent target) {
    const Context& gamma = d1->conclusion.antecedent;
    const RuleApp& app = d2->rule;
    const Shift sh{occ.level, occ.index, gamma.items.size()};

    auto commute = [&](const char* l) {
      label(l);
      const Edit e = premiss_edit(app);
      std::vector<Derivation> out;
      for (const Derivation& p : aligned_premisses(d2)) out.push_back(cut(d1, p, must(map_occ(e, occ)), rank));
      return node(std::move(target), map_app(app, sh), std::move(out));
    };

    switch (app.kind) {
      case RuleKind::Id:
        label("(xi)(a)");
        return node(std::move(target), map_app(app, sh));
      case RuleKind::BotL:
        label("(xi)(b)");
        return node(std::move(target), map_app(app, sh));
      case RuleKind::TopR:
        label("(xi)(c)");
        return node(std::move(target), app);
      case RuleKind::AndL:
        return commute("(xi)(d)");
      case RuleKind::OrL:
        return commute("(xi)(e)");
      case RuleKind::DiaL:
        return commute("(xi)(f)");
      case RuleKind::BoxL:
        if (Occurrence{app.principal.inside(), app.inner} == occ) return box_principal(d1, d2, occ, rank, target);
        return commute("(xi)(g)");
      case RuleKind::AndR:
        return commute("(xi)(i)");
      case RuleKind::OrR1:
      case RuleKind::OrR2:
        return commute("(xi)(j)");
      case RuleKind::BoxR:
        return commute("(xi)(l)");
      case RuleKind::Assn:
        return commute(occ.level == app.principal.inside() ? "(xi)(n)" : "(xi)(m)");
      case RuleKind::DiaR: {
        label("(xi)(k)");
        const std::size_t k = app.principal.index;
        if (!occ.level.empty() && occ.level.steps[0] == k) {
          const Derivation p = aligned_premisses(d2)[0];
          return node(std::move(target), app, {cut(d1, p, Occurrence{suffix(occ.level, 1), occ.index}, rank)});
        }
        // The cut formula sits in the parameter: the same premiss serves.
        return node(std::move(target), occ.level.empty() ? map_app(app, sh) : app, d2->premisses);
      }
      case RuleKind::Cut:
        throw TransformError("cut elimination: second premiss contains a cut");
    }
    throw std::logic_error("unreachable rule kind");
  }

  /// Second premiss is BoxL with the cut formula □_A m as its box.
  Derivation box_principal(const Derivation& d1, const Derivation& d2, const Occurrence& occ, const Rank& rank,
                           const Sequent& target) {
    label("(xi)(h)");
    const RuleApp& app = d2->rule;
    const Path& lv = app.principal.level;
    const std::size_t item = app.principal.index;
    const Derivation p2 = aligned_premisses(d2)[0];
    const Derivation p1 = aligned_premisses(d1)[0];
    // Δ′[(Γ, Γ′)^A, m] from a cut on □_A m of smaller height.
    const Derivation q = cut(d1, p2, must(map_occ(premiss_edit(app), occ)), rank);
    // Δ′[(Γ, Γ′)^A, Γ^A] from a cut on m.
    const Derivation r = cut(p1, q, Occurrence{lv, 0}, rank);
    const Context rest = remove(item_at(d2->conclusion.antecedent, app.principal).context(),
                                Occurrence{Path{}, app.inner});
    const Derivation w = weaken_rec(r, lv.child(0), rest);
    const Derivation contracted = contract_rec(w, lv, item + 1, 0);
    return realign(contracted, target.antecedent);
  }

  const CutOptions& options_;
  CutReport* report_;
  std::size_t depth_ = 0;
};

void validate_for_cut(const Derivation& d, const CutOptions& options, const char* which) {
  require_cut_free(d, which);
  if (!options.validate_inputs) return;
  const CheckResult r = check(d, options.assumptions);
  if (!r.ok()) throw TransformError(std::string(which) + " does not check: " + r.report());
}

Derivation eliminate_cuts_rec(const Derivation& d, const CutOptions& options, CutReport* report) {
  if (d->cut_count == 0) return d;
  std::vector<Derivation> prem;
  for (const Derivation& p : d->premisses) prem.push_back(eliminate_cuts_rec(p, options, report));
  if (d->rule.kind != RuleKind::Cut) return node(d->conclusion, d->rule, std::move(prem));
  if (prem.size() != 2) throw TransformError("cut node without two premisses");
  const Occurrence& occ = d->rule.principal;
  const Context& ant = prem[1]->conclusion.antecedent;
  if (!valid_occurrence(ant, occ) || !item_at(ant, occ).is_formula() ||
      !(item_at(ant, occ).formula() == prem[0]->conclusion.succedent)) {
    throw TransformError("cut node does not address its cut formula");
  }
  CutEngine engine(options, report);
  Derivation out = engine.run(prem[0], prem[1], occ);
  if (!equivalent(out->conclusion, d->conclusion)) throw TransformError("cut node conclusion mismatch");
  return realign(out, d->conclusion.antecedent);
}

/// Folds the contents of the level into one formula with left rules; the
/// result's formula equals translate() of the original contents.
Derivation fold_level(Derivation d, const Path& level) {
  const std::size_t n = level_at(d->conclusion.antecedent, level).items.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Item it = level_at(d->conclusion.antecedent, level).items[i];
    if (it.is_formula()) continue;
    d = fold_level(d, level.child(i));
    const Formula body = level_at(d->conclusion.antecedent, level.child(i)).items[0].formula();
    Sequent s = d->conclusion;
    level_at(s.antecedent, level).items[i] = Item(Formula::dia(it.agent(), body));
    d = node(std::move(s), RuleApp{RuleKind::DiaL, Occurrence{level, i}}, {d});
  }
  if (n == 0) return weaken_rec(d, level, singleton(Formula::top()));
  for (std::size_t k = n; k-- > 1;) {
    Sequent s = d->conclusion;
    auto& items = level_at(s.antecedent, level).items;
    const Formula joined = Formula::conj(items[k - 1].formula(), items[k].formula());
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(k));
    items[k - 1] = Item(joined);
    d = node(std::move(s), RuleApp{RuleKind::AndL, Occurrence{level, k - 1}}, {d});
  }
  return d;
}

/// Derivation of ctx ⊢ translate(part), where every item of part is
/// equivalent to a distinct item of ctx.
Derivation prove_translation(const Context& ctx, const Context& part) {
  std::vector<std::size_t> source;
  std::vector<bool> used(ctx.items.size(), false);
  for (const Item& it : part.items) {
    const std::string key = canonical_key(it);
    std::size_t j = 0;
    while (j < ctx.items.size() && (used[j] || canonical_key(ctx.items[j]) != key)) ++j;
    if (j == ctx.items.size()) throw std::logic_error("translation part not found in context");
    used[j] = true;
    source.push_back(j);
  }
  Sequent s{ctx, translate(part)};
  if (part.items.empty()) return node(std::move(s), RuleApp{RuleKind::TopR});
  if (part.items.size() > 1) {
    const Derivation left = prove_translation(ctx, singleton(part.items[0]));
    const Derivation right =
        prove_translation(ctx, Context{std::vector<Item>(part.items.begin() + 1, part.items.end())});
    return node(std::move(s), RuleApp{RuleKind::AndR}, {left, right});
  }
  const std::size_t i = source[0];
  const Item& it = part.items[0];
  if (it.is_formula()) {
    return realign(derive_identity(remove(ctx, Occurrence{Path{}, i}), it.formula()), ctx);
  }
  return node(std::move(s), RuleApp{RuleKind::DiaR, Occurrence{Path{}, i}},
              {prove_translation(ctx.items[i].context(), it.context())});
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points.

Derivation weaken(const Derivation& d, const Path& level, const Context& extra) {
  require_cut_free(d, "weaken");
  if (!valid_level(d->conclusion.antecedent, level)) throw TransformError("weaken: invalid level");
  return weaken_rec(d, level, extra);
}

Derivation invert_and_left(const Derivation& d, const Occurrence& occ) {
  require_cut_free(d, "and-left inversion");
  const Formula& f = formula_item(d->conclusion.antecedent, occ, FormulaKind::And, "and-left inversion");
  return substitute_rec(d, occ, Context{{Item(f.left()), Item(f.right())}}, Substitution{RuleKind::AndL, 0});
}

std::pair<Derivation, Derivation> invert_or_left(const Derivation& d, const Occurrence& occ) {
  require_cut_free(d, "or-left inversion");
  const Formula& f = formula_item(d->conclusion.antecedent, occ, FormulaKind::Or, "or-left inversion");
  return {substitute_rec(d, occ, singleton(f.left()), Substitution{RuleKind::OrL, 0}),
          substitute_rec(d, occ, singleton(f.right()), Substitution{RuleKind::OrL, 1})};
}

Derivation invert_dia_left(const Derivation& d, const Occurrence& occ) {
  require_cut_free(d, "diamond-left inversion");
  const Formula& f = formula_item(d->conclusion.antecedent, occ, FormulaKind::Dia, "diamond-left inversion");
  return substitute_rec(d, occ, singleton(Item::annotated(f.agent(), singleton(f.body()))),
                        Substitution{RuleKind::DiaL, 0});
}

Derivation invert_box_right(const Derivation& d) {
  require_cut_free(d, "box-right inversion");
  if (!d->conclusion.succedent.is(FormulaKind::Box)) throw TransformError("box-right inversion: succedent is not a box");
  return invert_box_right_rec(d, d->conclusion.succedent.agent());
}

Derivation invert_and_right(const Derivation& d, int side) {
  require_cut_free(d, "and-right inversion");
  if (!d->conclusion.succedent.is(FormulaKind::And)) {
    throw TransformError("and-right inversion: succedent is not a conjunction");
  }
  if (side != 0 && side != 1) throw TransformError("and-right inversion: side must be 0 or 1");
  return invert_and_right_rec(d, static_cast<std::size_t>(side));
}

Derivation top_weak(const Derivation& d, const Occurrence& occ, const Context& replacement) {
  require_cut_free(d, "top substitution");
  formula_item(d->conclusion.antecedent, occ, FormulaKind::Top, "top substitution");
  return substitute_rec(d, occ, replacement, Substitution{RuleKind::Cut, 0});
}

Derivation contract_item(const Derivation& d, const Path& level, std::size_t keep, std::size_t drop) {
  require_cut_free(d, "contraction");
  const Context& ant = d->conclusion.antecedent;
  if (!valid_level(ant, level)) throw TransformError("contraction: invalid level");
  const Context& lv = level_at(ant, level);
  if (keep == drop || keep >= lv.items.size() || drop >= lv.items.size()) {
    throw TransformError("contraction: invalid item indices");
  }
  if (!equivalent(lv.items[keep], lv.items[drop])) throw TransformError("contraction: designated items differ");
  return contract_rec(d, level, keep, drop);
}

Derivation contract(const Derivation& d, const Path& level,
                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  require_cut_free(d, "contraction");
  std::vector<std::size_t> drops;
  for (const auto& [keep, drop] : pairs) drops.push_back(drop);
  std::sort(drops.begin(), drops.end());
  if (std::adjacent_find(drops.begin(), drops.end()) != drops.end()) {
    throw TransformError("contraction: an item is dropped twice");
  }
  for (const auto& [keep, drop] : pairs) {
    if (std::binary_search(drops.begin(), drops.end(), keep)) {
      throw TransformError("contraction: a kept item is also dropped");
    }
  }
  if (!valid_level(d->conclusion.antecedent, level)) throw TransformError("contraction: invalid level");
  Context target = d->conclusion.antecedent;
  for (std::size_t i = drops.size(); i-- > 0;) {
    if (drops[i] >= level_at(target, level).items.size()) throw TransformError("contraction: invalid item indices");
    target = remove(target, Occurrence{level, drops[i]});
  }

  auto rest = pairs;
  Derivation cur = d;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const auto [keep, drop] = rest[i];
    cur = contract_item(cur, level, keep, drop);
    for (std::size_t j = i + 1; j < rest.size(); ++j) {
      if (rest[j].first > drop) --rest[j].first;
      if (rest[j].second > drop) --rest[j].second;
    }
  }
  return realign(cur, target);
}

Derivation eliminate_cut(const Derivation& d1, const Derivation& d2, const Occurrence& occ,
                         const CutOptions& options, CutReport* report) {
  validate_for_cut(d1, options, "first premiss");
  validate_for_cut(d2, options, "second premiss");
  const Context& ant = d2->conclusion.antecedent;
  if (!valid_occurrence(ant, occ)) throw TransformError("cut: invalid occurrence");
  const Item& it = item_at(ant, occ);
  if (!it.is_formula() || !(it.formula() == d1->conclusion.succedent)) {
    throw TransformError("cut: occurrence does not hold the cut formula " + to_string(d1->conclusion.succedent));
  }
  CutEngine engine(options, report);
  return engine.run(d1, d2, occ);
}

Derivation eliminate_cuts(const Derivation& d, const CutOptions& options, CutReport* report) {
  if (!d) throw TransformError("cut elimination: null derivation");
  if (options.validate_inputs) {
    CheckOptions co;
    co.allow_cut = true;
    const CheckResult r = check(d, options.assumptions, co);
    if (!r.ok()) throw TransformError("derivation does not check: " + r.report());
  }
  return eliminate_cuts_rec(d, options, report);
}

Derivation derive_K(const Derivation& d, const Path& level, std::size_t gamma, std::size_t gamma_prime,
                    std::size_t joint, const CutOptions& options, CutReport* report) {
  require_cut_free(d, "K");
  const Context& ant = d->conclusion.antecedent;
  if (!valid_level(ant, level)) throw TransformError("K: invalid level");
  const Context& lv = level_at(ant, level);
  const std::size_t n = lv.items.size();
  if (gamma >= n || gamma_prime >= n || joint >= n || gamma == gamma_prime || gamma == joint ||
      gamma_prime == joint) {
    throw TransformError("K: invalid item indices");
  }
  const Item& a = lv.items[gamma];
  const Item& b = lv.items[gamma_prime];
  const Item& c = lv.items[joint];
  if (!a.is_annotated() || !b.is_annotated() || !c.is_annotated() || a.agent() != c.agent() ||
      b.agent() != c.agent()) {
    throw TransformError("K: items must be annotated with one agent");
  }
  if (!equivalent(concat(a.context(), b.context()), c.context())) {
    throw TransformError("K: joint item is not the union of the other two");
  }
  if (options.validate_inputs) {
    const CheckResult r = check(d, options.assumptions);
    if (!r.ok()) throw TransformError("K: input does not check: " + r.report());
  }

  const Context joint_ctx = c.context();

  // Δ[γ^A, γ′^A, (Γ,Γ′)^A] by left rules, then two cuts against ⋀ proofs.
  Derivation folded = fold_level(fold_level(d, level.child(gamma)), level.child(gamma_prime));
  CutOptions inner = options;
  inner.validate_inputs = false;
  CutEngine engine(inner, report);
  Derivation cur = engine.run(prove_translation(joint_ctx, a.context()), folded, Occurrence{level.child(gamma), 0});
  cur = engine.run(prove_translation(joint_ctx, b.context()), cur, Occurrence{level.child(gamma_prime), 0});

  std::vector<std::pair<std::size_t, std::size_t>> pairs{{joint, gamma}, {joint, gamma_prime}};
  return contract(cur, level, pairs);
}

const std::vector<std::string>& cut_case_labels() {
  static const std::vector<std::string> labels{
      "(i)",      "(ii)",     "(iii)",    "(iv)",     "(v)",      "(vi)",     "(vii)",
      "(viii)",   "(ix)",     "(x)",      "(xi)(a)",  "(xi)(b)",  "(xi)(c)",  "(xi)(d)",
      "(xi)(e)",  "(xi)(f)",  "(xi)(g)",  "(xi)(h)",  "(xi)(i)",  "(xi)(j)",  "(xi)(k)",
      "(xi)(l)",  "(xi)(m)",  "(xi)(n)",  "(xii)"};
  return labels;
}

}  // namespace apml
