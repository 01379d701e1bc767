#pragma once

#include <iosfwd>

namespace structlens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the structlens binary.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace structlens::cli
