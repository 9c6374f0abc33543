#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levymass::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kNumerical = 3,
  kUsage = 64,
};

/// Runs one subcommand. args excludes the program name. Tables go to the
/// file named by --out, else to $LEVYMASS_OUTPUT_DIR/<subcommand>.<ext>,
/// else to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace levymass::cli
