#pragma once

#include <iosfwd>

namespace mladlasso::cli {

/// Parses `argv` and dispatches to the fit, simulate or reproduce command.
/// Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mladlasso::cli
