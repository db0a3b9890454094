#pragma once

#include <stdexcept>
#include <string>

namespace micromaser {

/// Invalid parameter or argument (a physical or numerical knob out of range).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not be completed to the required accuracy:
/// singular systems, degenerate spectra, unconverged quadrature, truncation
/// leakage.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace micromaser
