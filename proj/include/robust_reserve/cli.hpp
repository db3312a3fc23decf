#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robust_reserve {

/// Runs one CLI invocation. `args` excludes the program name. Output goes to
/// `out` unless --out names a file. Returns 0 on success, 2 on invalid input,
/// 3 when verify finds a violated bound, 1 on internal failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robust_reserve
