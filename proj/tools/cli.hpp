#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace caid::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;
inline constexpr int kCapacityError = 3;

// Runs the tool on `args` (without the program name). Results go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caid::cli
