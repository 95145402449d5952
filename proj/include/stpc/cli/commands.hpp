#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stpc::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalError = 3,
  kIoError = 4,
};

// Runs one command. args excludes the program name. Domain errors are
// reported on `err` and mapped to ExitCode values.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, char** argv);

}  // namespace stpc::cli
