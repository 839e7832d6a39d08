#include "apml/calculus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

#include "apml/parse.hpp"
#include "apml/print.hpp"

namespace apml {

namespace {

constexpr std::array<std::string_view, 14> kRuleNames = {
    "Id", "BotL", "TopR", "AndL", "AndR", "OrL", "OrR1",
    "OrR2", "DiaL", "DiaR", "BoxL", "BoxR", "Cut", "Assn"};

const Formula& formula_at(const Context& ant, const Occurrence& occ, FormulaKind kind,
                          std::string_view what) {
  if (!valid_occurrence(ant, occ)) throw RuleError("principal occurrence out of range");
  const Item& item = item_at(ant, occ);
  if (!item.is_formula() || !item.formula().is(kind)) {
    throw RuleError(std::string("principal item is not ") + std::string(what));
  }
  return item.formula();
}

const Item& annotated_at(const Context& ant, const Occurrence& occ) {
  if (!valid_occurrence(ant, occ)) throw RuleError("principal occurrence out of range");
  const Item& item = item_at(ant, occ);
  if (!item.is_annotated()) throw RuleError("principal item is not annotated");
  return item;
}

void require_succedent(const Sequent& s, FormulaKind kind, std::string_view what) {
  if (!s.succedent.is(kind)) {
    throw RuleError(std::string("succedent is not ") + std::string(what));
  }
}

void collect_levels(const Context& ctx, const Path& here, std::vector<Path>& out) {
  out.push_back(here);
  for (std::size_t i = 0; i < ctx.items.size(); ++i) {
    if (ctx.items[i].is_annotated()) collect_levels(ctx.items[i].context(), here.child(i), out);
  }
}

bool level_contains(const Context& level, const Formula& f) {
  return std::any_of(level.items.begin(), level.items.end(),
                     [&](const Item& i) { return i.is_formula() && i.formula() == f; });
}

}  // namespace

std::string_view rule_name(RuleKind kind) { return kRuleNames.at(static_cast<std::size_t>(kind)); }

RuleKind rule_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (kRuleNames[i] == name) return static_cast<RuleKind>(i);
  }
  throw std::invalid_argument("unknown rule: " + std::string(name));
}

std::string AssumptionRule::to_line() const {
  return "assn " + agent.name + " " + trigger + " => " + to_string(consequent);
}

void validate(const AssumptionRule& rule) {
  std::vector<const Formula*> stack{&rule.consequent};
  while (!stack.empty()) {
    const Formula* f = stack.back();
    stack.pop_back();
    if (f->is(FormulaKind::Or)) {
      stack.push_back(&f->left());
      stack.push_back(&f->right());
    } else if (!f->is(FormulaKind::Atom)) {
      throw std::invalid_argument("assumption consequent must be a disjunction of atoms");
    }
  }
  if (rule.agent.name.empty() || rule.trigger.empty()) {
    throw std::invalid_argument("assumption needs an agent and a trigger atom");
  }
}

AssumptionRule parse_assumption(std::string_view line) {
  std::size_t p = 0;
  auto skip = [&] {
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p])) != 0) ++p;
  };
  auto word = [&] {
    skip();
    const std::size_t start = p;
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p])) == 0) ++p;
    return std::string(line.substr(start, p - start));
  };
  if (word() != "assn") throw SyntaxError("expected 'assn'", 0);
  const std::size_t agent_pos = p;
  AssumptionRule rule;
  rule.agent = Agent(word());
  const std::size_t trigger_pos = p;
  Formula trigger = parse_formula(word());
  if (!trigger.is(FormulaKind::Atom)) throw SyntaxError("trigger must be an atom", trigger_pos);
  rule.trigger = trigger.name();
  skip();
  if (line.substr(p, 2) != "=>") throw SyntaxError("expected '=>'", p);
  p += 2;
  try {
    rule.consequent = parse_formula(line.substr(p));
  } catch (const SyntaxError& e) {
    throw SyntaxError("bad consequent", p + e.position());
  }
  const std::string& name = rule.agent.name;
  const bool upper = !name.empty() && std::isupper(static_cast<unsigned char>(name[0])) != 0 &&
                     std::all_of(name.begin(), name.end(),
                                 [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
  const bool digits = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
  if (!upper && !digits) throw SyntaxError("bad agent name", agent_pos);
  try {
    validate(rule);
  } catch (const std::invalid_argument& e) {
    throw SyntaxError(e.what(), trigger_pos);
  }
  return rule;
}

Assumptions parse_assumptions(std::string_view text) {
  Assumptions out;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const bool blank = std::all_of(line.begin(), line.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c)) != 0;
    });
    if (!blank) {
      try {
        out.push_back(parse_assumption(line));
      } catch (const SyntaxError& e) {
        throw SyntaxError(e.what(), offset + e.position());
      }
    }
    offset = end + 1;
  }
  return out;
}

std::string format_assumptions(const Assumptions& rules) {
  std::string out;
  for (const auto& r : rules) out += r.to_line() + "\n";
  return out;
}

Derivation make_derivation(Sequent conclusion, RuleApp rule, std::vector<Derivation> premisses) {
  auto node = std::make_shared<DerivationNode>();
  node->conclusion = std::move(conclusion);
  node->rule = std::move(rule);
  node->cut_count = node->rule.kind == RuleKind::Cut ? 1 : 0;
  node->assn_count = node->rule.kind == RuleKind::Assn ? 1 : 0;
  for (const auto& p : premisses) {
    node->height = std::max(node->height, p->height + 1);
    node->node_count += p->node_count;
    node->cut_count += p->cut_count;
    node->assn_count += p->assn_count;
  }
  node->premisses = std::move(premisses);
  return node;
}

std::vector<Sequent> premisses_of(const Sequent& s, const RuleApp& rule) {
  const Context& ant = s.antecedent;
  const Occurrence& occ = rule.principal;
  switch (rule.kind) {
    case RuleKind::Id: {
      if (!occ.level.empty()) throw RuleError("identity atom must be at top level");
      const Formula& p = formula_at(ant, occ, FormulaKind::Atom, "an atom");
      if (!(p == s.succedent)) throw RuleError("identity atom differs from succedent");
      return {};
    }
    case RuleKind::BotL:
      formula_at(ant, occ, FormulaKind::Bot, "bot");
      return {};
    case RuleKind::TopR:
      require_succedent(s, FormulaKind::Top, "top");
      return {};
    case RuleKind::AndL: {
      const Formula& f = formula_at(ant, occ, FormulaKind::And, "a conjunction");
      Context filler;
      filler.items = {Item(f.left()), Item(f.right())};
      return {Sequent{replace(ant, occ, filler), s.succedent}};
    }
    case RuleKind::OrL: {
      const Formula& f = formula_at(ant, occ, FormulaKind::Or, "a disjunction");
      return {Sequent{replace(ant, occ, singleton(f.left())), s.succedent},
              Sequent{replace(ant, occ, singleton(f.right())), s.succedent}};
    }
    case RuleKind::DiaL: {
      const Formula& f = formula_at(ant, occ, FormulaKind::Dia, "a diamond");
      Item ann = Item::annotated(f.agent(), singleton(f.body()));
      return {Sequent{replace(ant, occ, singleton(std::move(ann))), s.succedent}};
    }
    case RuleKind::BoxL: {
      const Item& item = annotated_at(ant, occ);
      const Occurrence box_occ{occ.inside(), rule.inner};
      const Formula& box = formula_at(ant, box_occ, FormulaKind::Box, "a box");
      if (box.agent() != item.agent()) throw RuleError("box agent differs from annotation agent");
      return {Sequent{plug(ant, occ.level, singleton(box.body())), s.succedent}};
    }
    case RuleKind::Assn: {
      if (!rule.assumption) throw RuleError("assumption instance without a rule");
      const AssumptionRule& a = *rule.assumption;
      const Item& item = annotated_at(ant, occ);
      if (item.agent() != a.agent) throw RuleError("assumption agent differs from annotation agent");
      const Formula& p = formula_at(ant, Occurrence{occ.inside(), rule.inner}, FormulaKind::Atom,
                                    "the trigger atom");
      if (p.name() != a.trigger) throw RuleError("trigger atom differs from assumption");
      return {Sequent{plug(ant, occ.level, singleton(a.consequent)), s.succedent}};
    }
    case RuleKind::AndR:
      require_succedent(s, FormulaKind::And, "a conjunction");
      return {Sequent{ant, s.succedent.left()}, Sequent{ant, s.succedent.right()}};
    case RuleKind::OrR1:
      require_succedent(s, FormulaKind::Or, "a disjunction");
      return {Sequent{ant, s.succedent.left()}};
    case RuleKind::OrR2:
      require_succedent(s, FormulaKind::Or, "a disjunction");
      return {Sequent{ant, s.succedent.right()}};
    case RuleKind::DiaR: {
      require_succedent(s, FormulaKind::Dia, "a diamond");
      if (!occ.level.empty()) throw RuleError("diamond-right principal item must be at top level");
      const Item& item = annotated_at(ant, occ);
      if (item.agent() != s.succedent.agent()) throw RuleError("annotation agent differs from diamond");
      return {Sequent{item.context(), s.succedent.body()}};
    }
    case RuleKind::BoxR: {
      require_succedent(s, FormulaKind::Box, "a box");
      return {Sequent{singleton(Item::annotated(s.succedent.agent(), ant)), s.succedent.body()}};
    }
    case RuleKind::Cut:
      throw RuleError("cut premisses are not determined by the conclusion");
  }
  throw RuleError("unknown rule");
}

std::vector<Instance> backward_instances(const Sequent& s, const Assumptions& assumptions) {
  std::vector<Instance> out;
  auto add = [&](RuleApp app) {
    auto prem = premisses_of(s, app);
    out.push_back(Instance{std::move(app), std::move(prem)});
  };
  const Context& ant = s.antecedent;
  std::vector<Path> levels;
  collect_levels(ant, Path{}, levels);

  for (std::size_t i = 0; i < ant.items.size(); ++i) {
    const Item& it = ant.items[i];
    if (it.is_formula() && it.formula().is(FormulaKind::Atom) && it.formula() == s.succedent) {
      add(RuleApp{RuleKind::Id, Occurrence{Path{}, i}, 0, std::nullopt});
    }
  }
  for (const Path& level : levels) {
    const Context& lv = level_at(ant, level);
    for (std::size_t i = 0; i < lv.items.size(); ++i) {
      const Item& it = lv.items[i];
      const Occurrence occ{level, i};
      if (it.is_formula()) {
        switch (it.formula().kind()) {
          case FormulaKind::Bot:
            add(RuleApp{RuleKind::BotL, occ, 0, std::nullopt});
            break;
          case FormulaKind::And:
            add(RuleApp{RuleKind::AndL, occ, 0, std::nullopt});
            break;
          case FormulaKind::Or:
            add(RuleApp{RuleKind::OrL, occ, 0, std::nullopt});
            break;
          case FormulaKind::Dia:
            add(RuleApp{RuleKind::DiaL, occ, 0, std::nullopt});
            break;
          default:
            break;
        }
        continue;
      }
      const Context& inner = it.context();
      for (std::size_t j = 0; j < inner.items.size(); ++j) {
        const Item& in = inner.items[j];
        if (!in.is_formula()) continue;
        const Formula& f = in.formula();
        if (f.is(FormulaKind::Box) && f.agent() == it.agent() && !level_contains(lv, f.body())) {
          add(RuleApp{RuleKind::BoxL, occ, j, std::nullopt});
        }
        if (f.is(FormulaKind::Atom)) {
          for (const auto& a : assumptions) {
            if (a.agent == it.agent() && a.trigger == f.name()) {
              add(RuleApp{RuleKind::Assn, occ, j, a});
            }
          }
        }
      }
    }
  }
  switch (s.succedent.kind()) {
    case FormulaKind::Top:
      add(RuleApp{RuleKind::TopR, {}, 0, std::nullopt});
      break;
    case FormulaKind::And:
      add(RuleApp{RuleKind::AndR, {}, 0, std::nullopt});
      break;
    case FormulaKind::Or:
      add(RuleApp{RuleKind::OrR1, {}, 0, std::nullopt});
      add(RuleApp{RuleKind::OrR2, {}, 0, std::nullopt});
      break;
    case FormulaKind::Box:
      add(RuleApp{RuleKind::BoxR, {}, 0, std::nullopt});
      break;
    case FormulaKind::Dia:
      for (std::size_t i = 0; i < ant.items.size(); ++i) {
        if (ant.items[i].is_annotated() && ant.items[i].agent() == s.succedent.agent()) {
          add(RuleApp{RuleKind::DiaR, Occurrence{Path{}, i}, 0, std::nullopt});
        }
      }
      break;
    default:
      break;
  }
  return out;
}

namespace {

std::string describe(const RuleApp& app) {
  std::ostringstream os;
  os << rule_name(app.kind) << " at " << app.principal;
  if (app.kind == RuleKind::BoxL || app.kind == RuleKind::Assn) os << " inner " << app.inner;
  if (app.assumption) os << " using " << app.assumption->to_line();
  return os.str();
}

void check_node(const Derivation& d, const Assumptions& assumptions, CheckOptions options,
                std::vector<std::size_t>& trail, CheckResult& result) {
  const Sequent& s = d->conclusion;
  const RuleApp& app = d->rule;
  auto reject = [&](std::string expected, std::string found) {
    result.rejections.push_back(Rejection{trail, describe(app), std::move(expected), std::move(found)});
  };
  auto shape = [&] {
    std::string out;
    for (std::size_t i = 0; i < d->premisses.size(); ++i) {
      if (i != 0) out += " ; ";
      out += to_string(d->premisses[i]->conclusion);
    }
    return "premisses [" + out + "] under conclusion " + to_string(s);
  };

  if (app.kind == RuleKind::Cut) {
    if (!options.allow_cut) {
      reject("cut-free derivation", "Cut node");
    } else if (d->premisses.size() != 2) {
      reject("two premisses", std::to_string(d->premisses.size()) + " premisses");
    } else {
      const Sequent& left = d->premisses[0]->conclusion;
      const Sequent& right = d->premisses[1]->conclusion;
      const Occurrence& occ = app.principal;
      if (!valid_occurrence(right.antecedent, occ) || !item_at(right.antecedent, occ).is_formula() ||
          !(item_at(right.antecedent, occ).formula() == left.succedent)) {
        reject("cut formula " + to_string(left.succedent) + " at " +
                   [&] { std::ostringstream o; o << occ; return o.str(); }() + " of the second premiss",
               shape());
      } else {
        Sequent expected{replace(right.antecedent, occ, left.antecedent), right.succedent};
        if (!equivalent(expected, s)) reject("conclusion " + to_string(expected), shape());
      }
    }
  } else {
    bool known = true;
    if (app.kind == RuleKind::Assn) {
      known = app.assumption &&
              std::find(assumptions.begin(), assumptions.end(), *app.assumption) != assumptions.end();
      if (!known) reject("an assumption from the active set", app.assumption ? app.assumption->to_line() : "none");
    }
    if (known) {
      try {
        std::vector<Sequent> expected = premisses_of(s, app);
        bool match = expected.size() == d->premisses.size();
        for (std::size_t i = 0; match && i < expected.size(); ++i) {
          match = equivalent(expected[i], d->premisses[i]->conclusion);
        }
        if (!match) {
          std::string exp;
          for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i != 0) exp += " ; ";
            exp += to_string(expected[i]);
          }
          reject("premisses [" + exp + "]", shape());
        }
      } catch (const RuleError& e) {
        reject(e.what(), "conclusion " + to_string(s));
      }
    }
  }
  for (std::size_t i = 0; i < d->premisses.size(); ++i) {
    trail.push_back(i);
    check_node(d->premisses[i], assumptions, options, trail, result);
    trail.pop_back();
  }
}

}  // namespace

std::string CheckResult::report() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& r : rejections) {
    os << "node [";
    for (std::size_t i = 0; i < r.node.size(); ++i) os << (i ? "." : "") << r.node[i];
    os << "] " << r.rule << ": expected " << r.expected << "; found " << r.found << "\n";
  }
  return os.str();
}

CheckResult check(const Derivation& d, const Assumptions& assumptions, CheckOptions options) {
  CheckResult result;
  std::vector<std::size_t> trail;
  check_node(d, assumptions, options, trail, result);
  return result;
}

Derivation realign(const Derivation& d, const Context& order) {
  if (d->conclusion.antecedent == order) return d;
  const ContextMap map = match(d->conclusion.antecedent, order);
  RuleApp app = d->rule;
  switch (app.kind) {
    case RuleKind::Cut:
    case RuleKind::TopR:
    case RuleKind::AndR:
    case RuleKind::OrR1:
    case RuleKind::OrR2:
    case RuleKind::BoxR:
      break;
    case RuleKind::BoxL:
    case RuleKind::Assn: {
      const Occurrence inner = map.map_occurrence(Occurrence{app.principal.inside(), app.inner});
      app.principal = map.map_occurrence(app.principal);
      app.inner = inner.index;
      break;
    }
    default:
      app.principal = map.map_occurrence(app.principal);
  }
  return make_derivation(Sequent{order, d->conclusion.succedent}, std::move(app), d->premisses);
}

Derivation derive_identity(const Context& gamma, const Formula& m) {
  Context ant = concat(gamma, singleton(m));
  const Occurrence last{Path{}, gamma.items.size()};
  Sequent s{ant, m};
  switch (m.kind()) {
    case FormulaKind::Atom:
      return make_derivation(s, RuleApp{RuleKind::Id, last, 0, std::nullopt}, {});
    case FormulaKind::Bot:
      return make_derivation(s, RuleApp{RuleKind::BotL, last, 0, std::nullopt}, {});
    case FormulaKind::Top:
      return make_derivation(s, RuleApp{RuleKind::TopR, {}, 0, std::nullopt}, {});
    case FormulaKind::And: {
      Derivation l = derive_identity(concat(gamma, singleton(m.right())), m.left());
      Derivation r = derive_identity(concat(gamma, singleton(m.left())), m.right());
      Context split = concat(gamma, Context{{Item(m.left()), Item(m.right())}});
      Derivation andr = make_derivation(Sequent{split, m}, RuleApp{RuleKind::AndR, {}, 0, std::nullopt},
                                        {std::move(l), std::move(r)});
      return make_derivation(s, RuleApp{RuleKind::AndL, last, 0, std::nullopt}, {std::move(andr)});
    }
    case FormulaKind::Or: {
      Derivation l = make_derivation(Sequent{concat(gamma, singleton(m.left())), m},
                                     RuleApp{RuleKind::OrR1, {}, 0, std::nullopt},
                                     {derive_identity(gamma, m.left())});
      Derivation r = make_derivation(Sequent{concat(gamma, singleton(m.right())), m},
                                     RuleApp{RuleKind::OrR2, {}, 0, std::nullopt},
                                     {derive_identity(gamma, m.right())});
      return make_derivation(s, RuleApp{RuleKind::OrL, last, 0, std::nullopt}, {std::move(l), std::move(r)});
    }
    case FormulaKind::Dia: {
      Context opened = concat(gamma, singleton(Item::annotated(m.agent(), singleton(m.body()))));
      Derivation diar = make_derivation(Sequent{opened, m}, RuleApp{RuleKind::DiaR, last, 0, std::nullopt},
                                        {derive_identity(Context{}, m.body())});
      return make_derivation(s, RuleApp{RuleKind::DiaL, last, 0, std::nullopt}, {std::move(diar)});
    }
    case FormulaKind::Box: {
      Context boxed = singleton(Item::annotated(m.agent(), ant));
      Derivation inner = derive_identity(boxed, m.body());
      Derivation boxl = make_derivation(Sequent{boxed, m.body()},
                                        RuleApp{RuleKind::BoxL, Occurrence{Path{}, 0}, gamma.items.size(),
                                                std::nullopt},
                                        {std::move(inner)});
      return make_derivation(s, RuleApp{RuleKind::BoxR, {}, 0, std::nullopt}, {std::move(boxl)});
    }
  }
  throw std::logic_error("unreachable formula kind");
}

std::size_t count_rule(const Derivation& d, RuleKind kind) {
  std::size_t n = d->rule.kind == kind ? 1 : 0;
  for (const auto& p : d->premisses) n += count_rule(p, kind);
  return n;
}

}  // namespace apml
