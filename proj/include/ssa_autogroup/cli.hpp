#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssa_autogroup::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for `ssa_autogroup <analyze|simulate|wcorr> ...`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ssa_autogroup::cli
