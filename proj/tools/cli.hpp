#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qdaf::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kParseError = 3,
    kIoError = 4,
};

/// Entry point for the `qdaf` command. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdaf::cli
