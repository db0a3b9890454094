#include "micromaser/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace micromaser {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

void write_comment(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& line : lines) os << "# " << line << '\n';
}

void write_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format_number(values[i]);
  }
  os << '\n';
}

}  // namespace micromaser
