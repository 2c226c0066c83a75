#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

namespace nbcf::cli {

/// Runs one CLI invocation. Returns 0 on success, 1 on a runtime error and
/// 2 on a usage error; diagnostics go to `err` as "error_code: message".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "start:end:step" -> inclusive arithmetic sequence. The end point is kept
/// when it lies within 1e-9 of a grid point. Throws UsageError.
std::vector<double> parse_grid(std::string_view spec);

}  // namespace nbcf::cli
