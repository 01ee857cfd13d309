#ifndef CHEMO_CLI_H_
#define CHEMO_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace chemo {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInvalidData = 65;
inline constexpr int kExitBackend = 70;

// Runs one command line (`args` excludes the program name) and returns the
// exit code. Human-readable output goes to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chemo

#endif  // CHEMO_CLI_H_
