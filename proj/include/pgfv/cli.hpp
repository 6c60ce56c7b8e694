#pragma once

#include <string>
#include <vector>

namespace pgfv {

/// Command-line entry point (subcommands: solve, converge, stencil,
/// validate, infsup). Returns 0 on success, 1 on usage errors, 2 on
/// numerical failures; errors go to stderr with an "error:" prefix.
int cli_main(int argc, const char* const* argv);

/// Same, for in-process invocation; args excludes the program name.
int cli_main(const std::vector<std::string>& args);

} // namespace pgfv
