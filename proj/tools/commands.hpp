#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace regula::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitPrecondition = 4;

/// Runs `regula <subcommand> --config <path> [--seed <u64>] [--out <dir>]`.
/// `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regula::cli
