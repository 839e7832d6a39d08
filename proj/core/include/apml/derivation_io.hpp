#ifndef APML_DERIVATION_IO_HPP
#define APML_DERIVATION_IO_HPP

#include <string>
#include <string_view>

#include "apml/calculus.hpp"

namespace apml {

/// JSON document: {"rule", "conclusion", "principal": {"level": [..], "index"},
/// "inner", "assumption", "premisses": [...]}. Every node is written with its
/// conclusion in canonical order, so positions refer to the printed sequent.
std::string derivation_to_json(const Derivation& d, int indent = 2);

/// Throws SyntaxError on malformed documents or sequents.
Derivation derivation_from_json(std::string_view text);

/// Indented plain-text rendering, one node per line, conclusion first.
std::string derivation_to_text(const Derivation& d);

}  // namespace apml

#endif  // APML_DERIVATION_IO_HPP
