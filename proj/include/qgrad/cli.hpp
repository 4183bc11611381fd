#pragma once

#include <iosfwd>

namespace qgrad {

/// Entry point of the `qgrad` tool. Returns 0 on success, 2 for invalid
/// configuration, 1 for runtime failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgrad
