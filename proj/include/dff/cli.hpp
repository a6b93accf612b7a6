#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dff {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOperational = 2;
inline constexpr int kExitUsage = 64;

// Runs one `dff` invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dff
