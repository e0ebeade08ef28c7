#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace m3gen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Relative output paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "M3GEN_OUTPUT_DIR";

/// `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace m3gen::cli
