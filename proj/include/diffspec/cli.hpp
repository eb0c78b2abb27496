#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diffspec::cli {

enum ExitCode : int {
    kOk = 0,
    kMismatch = 1,
    kInvalidArgument = 2,
    kCapExceeded = 3,
};

/// Runs one command line (without the program name). Artifacts and results
/// go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace diffspec::cli
