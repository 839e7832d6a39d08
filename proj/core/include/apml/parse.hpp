#ifndef APML_PARSE_HPP
#define APML_PARSE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "apml/syntax.hpp"

namespace apml {

/// Parse failure with the byte offset of the offending token.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

enum class ParseKind { Formula, Sequent, Context };

using Parsed = std::variant<Formula, Sequent, Context>;

Formula parse_formula(std::string_view text);
Context parse_context(std::string_view text);
Sequent parse_sequent(std::string_view text);
Parsed parse(std::string_view text, ParseKind kind);
/// "formula" | "sequent" | "context"; throws std::invalid_argument otherwise.
ParseKind parse_kind(std::string_view name);

}  // namespace apml

#endif  // APML_PARSE_HPP
