#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcb::cli {

enum ExitCode : int { ok = 0, invalid_input = 2, undefined_at_point = 3 };

/// Parses `args` (without the program name) and runs one subcommand.
/// Normal output goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixed 12-significant-digit rendering used for every number the tool prints.
std::string format_number(double value);

/// Comma-separated values, each either a number, "inf", or a lo:hi:n range
/// (n evenly spaced points, endpoints included).
std::vector<double> parse_list(const std::string& text);

}  // namespace hcb::cli
