#include "apml/parse.hpp"

#include <cctype>
#include <unordered_set>

namespace apml {

SyntaxError::SyntaxError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula formula() { return disjunction(); }

  Context context() {
    Context ctx;
    skip();
    if (at_end() || peek_is("|-") || peek() == ')') return ctx;
    ctx.items.push_back(item());
    while (accept(",")) ctx.items.push_back(item());
    return ctx;
  }

  Sequent sequent() {
    Sequent s;
    s.antecedent = context();
    expect("|-");
    s.succedent = formula();
    return s;
  }

  void finish() {
    skip();
    if (!at_end()) fail("unexpected trailing input");
  }

 private:
  Item item() {
    skip();
    const std::size_t start = pos_;
    if (peek() == '(' && failed_annotations_.count(start) == 0) {
      try {
        ++pos_;
        Context inner = context();
        expect(")");
        expect("^");
        return Item::annotated(agent(), std::move(inner));
      } catch (const SyntaxError&) {
        failed_annotations_.insert(start);
        pos_ = start;
      }
    }
    return Item(formula());
  }

  Formula disjunction() {
    Formula left = conjunction();
    skip();
    if (peek() == '|' && !peek_is("|-")) {
      ++pos_;
      return Formula::disj(std::move(left), disjunction());
    }
    return left;
  }

  Formula conjunction() {
    Formula left = unary();
    if (accept("&")) return Formula::conj(std::move(left), conjunction());
    return left;
  }

  Formula unary() {
    skip();
    if (accept("<")) {
      Agent a = agent();
      expect(">");
      return Formula::dia(std::move(a), unary());
    }
    if (accept("[")) {
      Agent a = agent();
      expect("]");
      return Formula::box(std::move(a), unary());
    }
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (std::islower(static_cast<unsigned char>(peek())) != 0) {
      std::string name = atom_name();
      if (name == "top") return Formula::top();
      if (name == "bot") return Formula::bot();
      return Formula::atom(std::move(name));
    }
    fail(at_end() ? "unexpected end of input" : "expected a formula");
  }

  std::string atom_name() {
    const std::size_t start = pos_;
    int braces = 0;
    ++pos_;
    while (!at_end()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_') {
        ++pos_;
      } else if (c == '{') {
        ++braces;
        ++pos_;
      } else if (c == '}' && braces > 0) {
        --braces;
        ++pos_;
      } else if (c == ',' && braces > 0) {
        ++pos_;
      } else {
        break;
      }
    }
    if (braces != 0) fail("unbalanced braces in atom");
    return std::string(text_.substr(start, pos_ - start));
  }

  Agent agent() {
    skip();
    const std::size_t start = pos_;
    const char c = peek();
    if (std::isupper(static_cast<unsigned char>(c)) != 0) {
      ++pos_;
      while (!at_end() && std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    } else {
      fail("expected an agent name");
    }
    return Agent(std::string(text_.substr(start, pos_ - start)));
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool peek_is(std::string_view tok) const { return text_.substr(pos_, tok.size()) == tok; }

  bool accept(std::string_view tok) {
    skip();
    if (!peek_is(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(message, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::unordered_set<std::size_t> failed_annotations_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  p.finish();
  return f;
}

Context parse_context(std::string_view text) {
  Parser p(text);
  Context c = p.context();
  p.finish();
  return c;
}

Sequent parse_sequent(std::string_view text) {
  Parser p(text);
  Sequent s = p.sequent();
  p.finish();
  return s;
}

Parsed parse(std::string_view text, ParseKind kind) {
  switch (kind) {
    case ParseKind::Formula:
      return parse_formula(text);
    case ParseKind::Sequent:
      return parse_sequent(text);
    case ParseKind::Context:
      return parse_context(text);
  }
  throw std::invalid_argument("unknown parse kind");
}

ParseKind parse_kind(std::string_view name) {
  if (name == "formula") return ParseKind::Formula;
  if (name == "sequent") return ParseKind::Sequent;
  if (name == "context") return ParseKind::Context;
  throw std::invalid_argument("unknown parse kind: " + std::string(name));
}

}  // namespace apml
