#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crunch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation (`args` excludes the program name). Reports go to `out` unless
/// --out is given; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// "x,y;x,y;..." explicit list, or "first:last:step" for diagonal starts [s, ..., s].
/// Throws crunch::ConfigError on malformed input.
std::vector<std::vector<double>> parse_starts(std::string_view text, std::size_t range_dimension = 2);

} // namespace crunch::cli
