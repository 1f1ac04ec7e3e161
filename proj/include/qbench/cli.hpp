#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qbench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `qbench` tool. `args` excludes the program name.
/// Returns 0 on success, 1 when the metric result is invalid and 2 on a
/// usage or configuration error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbench
