#pragma once

namespace qmicro::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIo = 3;

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv);

} // namespace qmicro::cli
