#ifndef APML_PRINT_HPP
#define APML_PRINT_HPP

#include <ostream>
#include <string>

#include "apml/syntax.hpp"

namespace apml {

// Concrete syntax:
//   <A>(f)  diamond,   [A](f)  box,   &  binds tighter than  |,
//   (Γ)^A   annotated item,   Γ |- f   sequent.
// Contexts are printed in canonical order, so equal multisets print equally.

std::string to_string(const Formula& f);
std::string to_string(const Item& item);
std::string to_string(const Context& ctx);
std::string to_string(const Sequent& s);

/// Prints items in their stored order (used for diagnostics that refer to
/// positions).
std::string to_string_raw(const Context& ctx);
std::string to_string_raw(const Sequent& s);

std::ostream& operator<<(std::ostream& os, const Formula& f);
std::ostream& operator<<(std::ostream& os, const Item& item);
std::ostream& operator<<(std::ostream& os, const Context& ctx);
std::ostream& operator<<(std::ostream& os, const Sequent& s);
std::ostream& operator<<(std::ostream& os, const Path& p);
std::ostream& operator<<(std::ostream& os, const Occurrence& o);

}  // namespace apml

#endif  // APML_PRINT_HPP
