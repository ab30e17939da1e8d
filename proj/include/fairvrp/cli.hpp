#pragma once

#include <iosfwd>

namespace fvrp {

/// Command-line entry point: subcommands solve, oracle, bench and gen.
/// Returns 0 on a completed run, 2 when a limit stopped the search, 1 on error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fvrp
