#pragma once

#include <stdexcept>

namespace proxgrad {

/// Invalid input parameters (penalty ranges, mesh size, config values).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative kernel (root finder, CG, Newton) failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested operation is not defined for this configuration.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace proxgrad
