#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace newton_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command line (without the program name); returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// lo..hi[:step] or a single number; throws std::invalid_argument on bad syntax or an empty range.
std::vector<double> parse_range(const std::string& text);

}  // namespace newton_lab::cli
