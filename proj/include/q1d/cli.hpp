#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace q1d {

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics and error JSON to `err`. Returns 0 on success, 1 on
/// invalid input, 2 on numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace q1d
