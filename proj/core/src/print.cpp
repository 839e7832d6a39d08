#include "apml/print.hpp"

#include <sstream>

namespace apml {

namespace {

void print_formula(std::string& out, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bot:
      out += "bot";
      return;
    case FormulaKind::Top:
      out += "top";
      return;
    case FormulaKind::Atom:
      out += f.name();
      return;
    case FormulaKind::Dia:
    case FormulaKind::Box:
      out += f.is(FormulaKind::Dia) ? "<" : "[";
      out += f.agent().name;
      out += f.is(FormulaKind::Dia) ? ">(" : "](";
      print_formula(out, f.body());
      out += ')';
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.is(FormulaKind::And);
      const Formula& l = f.left();
      const Formula& r = f.right();
      // Right-associative: a same-operator left child needs parentheses.
      const bool wrap_l = l.is(FormulaKind::Or) || (is_and && l.is(FormulaKind::And));
      const bool wrap_r = is_and && r.is(FormulaKind::Or);
      if (wrap_l) out += '(';
      print_formula(out, l);
      if (wrap_l) out += ')';
      out += is_and ? " & " : " | ";
      if (wrap_r) out += '(';
      print_formula(out, r);
      if (wrap_r) out += ')';
      return;
    }
  }
}

void print_raw(std::string& out, const Context& ctx) {
  for (std::size_t i = 0; i < ctx.items.size(); ++i) {
    if (i != 0) out += ", ";
    const Item& item = ctx.items[i];
    if (item.is_formula()) {
      print_formula(out, item.formula());
    } else {
      out += '(';
      print_raw(out, item.context());
      out += ")^";
      out += item.agent().name;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(out, f);
  return out;
}

std::string to_string(const Item& item) { return canonical_key(item); }
std::string to_string(const Context& ctx) { return canonical_key(ctx); }

std::string to_string(const Sequent& s) {
  std::string ant = canonical_key(s.antecedent);
  return ant.empty() ? "|- " + to_string(s.succedent) : ant + " |- " + to_string(s.succedent);
}

std::string to_string_raw(const Context& ctx) {
  std::string out;
  print_raw(out, ctx);
  return out;
}

std::string to_string_raw(const Sequent& s) {
  std::string ant = to_string_raw(s.antecedent);
  return ant.empty() ? "|- " + to_string(s.succedent) : ant + " |- " + to_string(s.succedent);
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }
std::ostream& operator<<(std::ostream& os, const Item& item) { return os << to_string(item); }
std::ostream& operator<<(std::ostream& os, const Context& ctx) { return os << to_string(ctx); }
std::ostream& operator<<(std::ostream& os, const Sequent& s) { return os << to_string(s); }

std::ostream& operator<<(std::ostream& os, const Path& p) {
  os << '[';
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (i != 0) os << '.';
    os << p.steps[i];
  }
  return os << ']';
}

std::ostream& operator<<(std::ostream& os, const Occurrence& o) {
  return os << o.level << '#' << o.index;
}

}  // namespace apml
