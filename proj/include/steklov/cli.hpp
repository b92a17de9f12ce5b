#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steklov::cli {

/// Runs one toolkit subcommand (forward | coeffs | recover | apdecide |
/// cover | classify | match | oracle).  Returns the process exit code:
/// 0 clean, 1 error, 2 ambiguous recovery, 3 model mismatch.  Errors print a
/// single machine-readable JSON line on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steklov::cli
