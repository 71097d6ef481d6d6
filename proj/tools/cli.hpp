#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dts::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

/// Runs the `dts` command line with argv-style arguments (args[0] is the program
/// name). Normal output goes to `out`, diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dts::cli
