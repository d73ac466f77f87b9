#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ati {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitRuntime = 1,  // I/O failure, port in use
  kExitUsage = 2,    // bad flags, schema errors, id mismatch
  kExitDimension = 3,  // image/trajectory/latent size mismatch, bad binary
};

/// Runs `ati <args...>` (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ati
