#ifndef APML_TOOLS_CLI_HPP
#define APML_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace apml::cli {

enum ExitCode : int {
  kAnswered = 0,
  kRefuted = 1,
  kBoundsExhausted = 2,
  kInputError = 3,
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apml::cli

#endif  // APML_TOOLS_CLI_HPP
