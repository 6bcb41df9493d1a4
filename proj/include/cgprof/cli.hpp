#pragma once

#include <iosfwd>

namespace cgprof::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `profile` tool; reports go to `out`, diagnostics to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cgprof::cli
