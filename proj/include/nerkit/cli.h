#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nerkit {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFindings = 1,  // data findings under --strict, or a module error
  kExitUsage = 2,
  kExitIo = 3,
  kExitInternal = 4,
};

// Runs the `nerkit` command with `args` (args[0] is the program name).
// Data goes to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nerkit
