#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qnetfid::cli {

/// Exit codes of the qnetfid tool.
enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kGraph = 4 };

/// Runs one command line (args[0] is the program name). Normal output goes
/// to `out`, diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnetfid::cli
