#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace micromaser {

/// 12 significant digits, locale independent.
std::string format_number(double x);

/// Writes each line prefixed with "# ".
void write_comment(std::ostream& os, const std::vector<std::string>& lines);

/// Writes one comma-separated row of numbers.
void write_row(std::ostream& os, const std::vector<double>& values);

}  // namespace micromaser
