#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gradfem {

/// Entry point of the `gradfem` command (`args` excludes the program name).
/// Returns the process exit status; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gradfem
