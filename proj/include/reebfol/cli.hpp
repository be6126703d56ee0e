#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reebfol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a check failed (e.g. the contact condition)
inline constexpr int kExitInput = 2;   // unreadable input or bad arguments

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out` unless an output file is given; diagnostics go to `err` as JSON
/// lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace reebfol::cli
