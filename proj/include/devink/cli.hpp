#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace devink::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

/// Runs the `devink` command line. `args` excludes the program name.
/// Normal output goes to `out`, diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace devink::cli
