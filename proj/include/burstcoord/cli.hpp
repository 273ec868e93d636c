#pragma once

#include <string>
#include <vector>

namespace burstcoord::cli {

// Exit codes: 0 ok, 2 invalid input, 3 IO failure, 4 insufficient data.
enum ExitCode : int { kOk = 0, kInputError = 2, kIoError = 3, kInsufficientData = 4 };

int run(int argc, char** argv);
// argv[0] included.
int run(const std::vector<std::string>& args);

}  // namespace burstcoord::cli
