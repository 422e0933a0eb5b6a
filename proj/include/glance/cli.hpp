#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glance::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kPartialFailure = 3 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
auto run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) -> int;

/// Four significant digits in fixed notation ("6.250", "0.05362").
auto format_significant4(double value) -> std::string;

} // namespace glance::cli
