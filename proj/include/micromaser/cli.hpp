#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace micromaser::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kNumeric = 3;
inline constexpr int kIo = 4;

/// Runs one subcommand. args excludes the program name. Human summaries go
/// to out; failures print a single "error: code=<kind> message=<text>" line
/// to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Names accepted by the figure subcommand.
const std::vector<std::string>& figure_names();

}  // namespace micromaser::cli
