#pragma once

#include <stdexcept>
#include <string>

namespace apsym {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phase vector and spec disagree in length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for this frequency class, e.g. mixed rational and irrational terms.
class UnsupportedClassError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis (e.g. "not limit periodic") does not hold.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed input: bad spec, bad config value, failed invariant at construction.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operation precondition not met by otherwise valid input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerical routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace apsym
