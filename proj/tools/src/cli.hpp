#pragma once

#include <iosfwd>

namespace ordersum::cli {

/// Runs the `ordersum` command line. Returns the process exit code; normal
/// output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ordersum::cli
