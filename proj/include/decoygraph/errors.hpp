#pragma once

#include <stdexcept>
#include <string>

namespace decoygraph {

/// Malformed input: bad documents, invalid graphs or parameters, unknown
/// endpoints, action-space overflow.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The enumeration cap was hit. Never silently truncated.
class OverflowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The solver could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace decoygraph
