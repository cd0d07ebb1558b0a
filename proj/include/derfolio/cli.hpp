#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace derfolio::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitOptimizer = 3;

/// Runs the command line (without the program name). Never throws; the
/// return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/**
 * Reads a `key=value` configuration file into `--key=value` arguments.
 * Blank lines and '#' comments are ignored; keys may repeat.
 */
std::vector<std::string> read_config(const std::string& path);

}  // namespace derfolio::cli
