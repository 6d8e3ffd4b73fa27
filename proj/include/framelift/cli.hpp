#pragma once

#include <iosfwd>

namespace framelift::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// Subcommands: surface info, lift table, geodesic, base-geodesic, verify.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace framelift::cli
