#pragma once

#include <stdexcept>
#include <string>

namespace sepscope {

/// Shapes or declared subsystem dimensions do not fit together.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The operation is only defined for d_A == d_B.
struct UnsupportedDimensionError : DimensionError {
  using DimensionError::DimensionError;
};

/// A value object failed one of its invariants (Hermiticity, trace, PSD, ...).
struct InvariantError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A parameter is outside its admissible range.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (non-finite input, decomposition failure).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sepscope
