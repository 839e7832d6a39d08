#include "apml/hilbert.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "apml/parse.hpp"
#include "apml/print.hpp"

namespace apml {

namespace {

const Agent kMetaAgent("A");

Formula mv(const char* name) { return Formula::atom(name); }

struct AxiomInfo {
  HilbertAxiom axiom;
  std::string_view name;
};

constexpr AxiomInfo kAxioms[] = {
    {HilbertAxiom::Identity, "identity"},
    {HilbertAxiom::BotLeft, "bot-left"},
    {HilbertAxiom::TopRight, "top-right"},
    {HilbertAxiom::Distributivity, "distributivity"},
    {HilbertAxiom::OrIntroLeft, "or-intro-left"},
    {HilbertAxiom::OrIntroRight, "or-intro-right"},
    {HilbertAxiom::AndElimLeft, "and-elim-left"},
    {HilbertAxiom::AndElimRight, "and-elim-right"},
    {HilbertAxiom::DiaJoin, "dia-join"},
    {HilbertAxiom::DiaBot, "dia-bot"},
    {HilbertAxiom::BoxMeet, "box-meet"},
    {HilbertAxiom::BoxTop, "box-top"},
    {HilbertAxiom::Counit, "counit"},
    {HilbertAxiom::Unit, "unit"},
};

bool unify(const Formula& pattern, const Formula& f, HilbertBinding& b) {
  switch (pattern.kind()) {
    case FormulaKind::Atom: {
      auto [it, inserted] = b.formulas.emplace(pattern.name(), f);
      return inserted || it->second == f;
    }
    case FormulaKind::Top:
    case FormulaKind::Bot:
      return f.is(pattern.kind());
    case FormulaKind::And:
    case FormulaKind::Or:
      return f.is(pattern.kind()) && unify(pattern.left(), f.left(), b) && unify(pattern.right(), f.right(), b);
    case FormulaKind::Dia:
    case FormulaKind::Box:
      if (!f.is(pattern.kind())) return false;
      if (b.agent && *b.agent != f.agent()) return false;
      b.agent = f.agent();
      return unify(pattern.body(), f.body(), b);
  }
  return false;
}

Formula instantiate(const Formula& pattern, const std::map<std::string, Formula>& formulas, const Agent& agent) {
  switch (pattern.kind()) {
    case FormulaKind::Atom:
      return formulas.at(pattern.name());
    case FormulaKind::Top:
    case FormulaKind::Bot:
      return pattern;
    case FormulaKind::And:
      return Formula::conj(instantiate(pattern.left(), formulas, agent),
                           instantiate(pattern.right(), formulas, agent));
    case FormulaKind::Or:
      return Formula::disj(instantiate(pattern.left(), formulas, agent),
                           instantiate(pattern.right(), formulas, agent));
    case FormulaKind::Dia:
      return Formula::dia(agent, instantiate(pattern.body(), formulas, agent));
    case FormulaKind::Box:
      return Formula::box(agent, instantiate(pattern.body(), formulas, agent));
  }
  throw std::logic_error("unreachable formula kind");
}

void metavariables(const Formula& f, std::vector<std::string>& out, bool& modal) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (std::find(out.begin(), out.end(), f.name()) == out.end()) out.push_back(f.name());
      return;
    case FormulaKind::Top:
    case FormulaKind::Bot:
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      metavariables(f.left(), out, modal);
      metavariables(f.right(), out, modal);
      return;
    case FormulaKind::Dia:
    case FormulaKind::Box:
      modal = true;
      metavariables(f.body(), out, modal);
      return;
  }
}

}  // namespace

const std::vector<HilbertAxiom>& hilbert_axioms() {
  static const std::vector<HilbertAxiom> all = [] {
    std::vector<HilbertAxiom> v;
    for (const auto& info : kAxioms) v.push_back(info.axiom);
    return v;
  }();
  return all;
}

std::string_view axiom_name(HilbertAxiom a) {
  for (const auto& info : kAxioms) {
    if (info.axiom == a) return info.name;
  }
  return "unknown";
}

HilbertAxiom axiom_from_name(std::string_view name) {
  for (const auto& info : kAxioms) {
    if (info.name == name) return info.axiom;
  }
  throw std::invalid_argument("unknown axiom: " + std::string(name));
}

HilbertSequent axiom_schema(HilbertAxiom a) {
  const Formula m = mv("m"), n = mv("n"), k = mv("k");
  const Agent& A = kMetaAgent;
  switch (a) {
    case HilbertAxiom::Identity:
      return {m, m};
    case HilbertAxiom::BotLeft:
      return {Formula::bot(), m};
    case HilbertAxiom::TopRight:
      return {m, Formula::top()};
    case HilbertAxiom::Distributivity:
      return {Formula::conj(m, Formula::disj(n, k)),
              Formula::disj(Formula::conj(m, n), Formula::conj(m, k))};
    case HilbertAxiom::OrIntroLeft:
      return {m, Formula::disj(m, n)};
    case HilbertAxiom::OrIntroRight:
      return {n, Formula::disj(m, n)};
    case HilbertAxiom::AndElimLeft:
      return {Formula::conj(m, n), m};
    case HilbertAxiom::AndElimRight:
      return {Formula::conj(m, n), n};
    case HilbertAxiom::DiaJoin:
      return {Formula::dia(A, Formula::disj(m, n)), Formula::disj(Formula::dia(A, m), Formula::dia(A, n))};
    case HilbertAxiom::DiaBot:
      return {Formula::dia(A, Formula::bot()), Formula::bot()};
    case HilbertAxiom::BoxMeet:
      return {Formula::conj(Formula::box(A, m), Formula::box(A, n)), Formula::box(A, Formula::conj(m, n))};
    case HilbertAxiom::BoxTop:
      return {Formula::top(), Formula::box(A, Formula::top())};
    case HilbertAxiom::Counit:
      return {Formula::dia(A, Formula::box(A, m)), m};
    case HilbertAxiom::Unit:
      return {m, Formula::box(A, Formula::dia(A, m))};
  }
  throw std::logic_error("unreachable axiom");
}

std::vector<AxiomInstance> axiom_instances(const std::vector<std::string>& atoms, const std::vector<Agent>& agents) {
  std::vector<AxiomInstance> out;
  if (atoms.empty() || agents.empty()) return out;
  for (HilbertAxiom a : hilbert_axioms()) {
    const HilbertSequent schema = axiom_schema(a);
    std::vector<std::string> vars;
    bool modal = false;
    metavariables(schema.left, vars, modal);
    metavariables(schema.right, vars, modal);
    const std::size_t agent_choices = modal ? agents.size() : 1;
    std::vector<std::size_t> pick(vars.size(), 0);
    for (;;) {
      std::map<std::string, Formula> formulas;
      for (std::size_t i = 0; i < vars.size(); ++i) formulas.emplace(vars[i], Formula::atom(atoms[pick[i]]));
      for (std::size_t g = 0; g < agent_choices; ++g) {
        out.push_back({a, HilbertSequent{instantiate(schema.left, formulas, agents[g]),
                                         instantiate(schema.right, formulas, agents[g])}});
      }
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == atoms.size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  return out;
}

std::optional<HilbertBinding> match_axiom(HilbertAxiom a, const HilbertSequent& s) {
  const HilbertSequent schema = axiom_schema(a);
  HilbertBinding b;
  if (!unify(schema.left, s.left, b) || !unify(schema.right, s.right, b)) return std::nullopt;
  return b;
}

std::string_view hilbert_rule_name(HilbertRule r) {
  switch (r) {
    case HilbertRule::Axiom:
      return "axiom";
    case HilbertRule::Cut:
      return "cut";
    case HilbertRule::Or:
      return "or";
    case HilbertRule::And:
      return "and";
    case HilbertRule::Dia:
      return "dia";
    case HilbertRule::Box:
      return "box";
  }
  return "unknown";
}

HilbertRule hilbert_rule_from_name(std::string_view name) {
  for (HilbertRule r : {HilbertRule::Axiom, HilbertRule::Cut, HilbertRule::Or, HilbertRule::And, HilbertRule::Dia,
                        HilbertRule::Box}) {
    if (hilbert_rule_name(r) == name) return r;
  }
  throw std::invalid_argument("unknown Hilbert rule: " + std::string(name));
}

std::string HilbertCheck::report() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& r : rejections) os << "step " << r.step << ": " << r.message << "\n";
  return os.str();
}

HilbertCheck check_hilbert(const HilbertDerivation& d) {
  HilbertCheck result;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const HilbertStep& st = d.steps[i];
    auto reject = [&](std::string msg) { result.rejections.push_back({i, std::move(msg)}); };
    const std::size_t arity = st.rule == HilbertRule::Axiom                                ? 0
                              : st.rule == HilbertRule::Dia || st.rule == HilbertRule::Box ? 1
                                                                                           : 2;
    if (st.premisses.size() != arity) {
      reject("expected " + std::to_string(arity) + " premisses, found " + std::to_string(st.premisses.size()));
      continue;
    }
    bool earlier = true;
    for (std::size_t p : st.premisses) earlier = earlier && p < i;
    if (!earlier) {
      reject("premisses must refer to earlier steps");
      continue;
    }
    const HilbertSequent& c = st.conclusion;
    auto prem = [&](std::size_t k) -> const HilbertSequent& { return d.steps[st.premisses[k]].conclusion; };
    switch (st.rule) {
      case HilbertRule::Axiom:
        if (!st.axiom) {
          reject("axiom step without an axiom name");
        } else if (!match_axiom(*st.axiom, c)) {
          reject(to_string(c) + " is not an instance of " + std::string(axiom_name(*st.axiom)));
        }
        break;
      case HilbertRule::Cut:
        if (!(prem(0).left == c.left && prem(1).right == c.right && prem(0).right == prem(1).left)) {
          reject("cut needs m |- m' and m' |- m'' for m |- m''");
        }
        break;
      case HilbertRule::Or:
        if (!c.left.is(FormulaKind::Or) || !(prem(0) == HilbertSequent{c.left.left(), c.right}) ||
            !(prem(1) == HilbertSequent{c.left.right(), c.right})) {
          reject("or rule needs m |- m'' and m' |- m'' for m | m' |- m''");
        }
        break;
      case HilbertRule::And:
        if (!c.right.is(FormulaKind::And) || !(prem(0) == HilbertSequent{c.left, c.right.left()}) ||
            !(prem(1) == HilbertSequent{c.left, c.right.right()})) {
          reject("and rule needs m |- m' and m |- m'' for m |- m' & m''");
        }
        break;
      case HilbertRule::Dia:
      case HilbertRule::Box: {
        const FormulaKind k = st.rule == HilbertRule::Dia ? FormulaKind::Dia : FormulaKind::Box;
        if (!c.left.is(k) || !c.right.is(k) || c.left.agent() != c.right.agent() ||
            (st.agent && *st.agent != c.left.agent()) ||
            !(prem(0) == HilbertSequent{c.left.body(), c.right.body()})) {
          reject(std::string(hilbert_rule_name(st.rule)) + " rule needs m |- m' under one modality of one agent");
        }
        break;
      }
    }
  }
  if (d.steps.empty()) result.rejections.push_back({0, "empty derivation"});
  return result;
}

Sequent to_sequent(const HilbertSequent& s) { return Sequent{singleton(s.left), s.right}; }

std::string to_string(const HilbertSequent& s) { return to_string(s.left) + " |- " + to_string(s.right); }

std::string hilbert_to_json(const HilbertDerivation& d, int indent) {
  using nlohmann::json;
  json steps = json::array();
  for (const auto& st : d.steps) {
    json j;
    j["conclusion"] = to_string(st.conclusion);
    j["rule"] = std::string(hilbert_rule_name(st.rule));
    if (st.axiom) j["axiom"] = std::string(axiom_name(*st.axiom));
    if (st.agent) j["agent"] = st.agent->name;
    j["premisses"] = st.premisses;
    steps.push_back(std::move(j));
  }
  return json{{"steps", std::move(steps)}}.dump(indent);
}

HilbertDerivation hilbert_from_json(std::string_view text) {
  using nlohmann::json;
  HilbertDerivation d;
  try {
    const json doc = json::parse(text);
    for (const auto& j : doc.at("steps")) {
      HilbertStep st;
      const Sequent s = parse_sequent(j.at("conclusion").get<std::string>());
      if (s.antecedent.items.size() != 1 || !s.antecedent.items[0].is_formula()) {
        throw SyntaxError("Hilbert sequents have exactly one antecedent formula", 0);
      }
      st.conclusion = HilbertSequent{s.antecedent.items[0].formula(), s.succedent};
      st.rule = hilbert_rule_from_name(j.at("rule").get<std::string>());
      if (j.contains("axiom")) st.axiom = axiom_from_name(j.at("axiom").get<std::string>());
      if (j.contains("agent")) st.agent = Agent(j.at("agent").get<std::string>());
      if (j.contains("premisses")) st.premisses = j.at("premisses").get<std::vector<std::size_t>>();
      d.steps.push_back(std::move(st));
    }
  } catch (const json::exception& e) {
    throw SyntaxError(std::string("malformed Hilbert derivation: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw SyntaxError(e.what(), 0);
  }
  return d;
}

}  // namespace apml
