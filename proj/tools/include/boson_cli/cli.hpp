#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace boson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTruncation = 3;

std::string version();

// Runs the tool on `args` (without the program name). Output files go under --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boson::cli
