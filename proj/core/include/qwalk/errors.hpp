#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

/// Base class for all qwalk errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A coefficient or rate violated one of the model constraints
/// (out-of-bound coefficient, nonpositive rate, bad argument domain).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed to converge (non-contracting diagonal
/// differences, divergent sweep, exhausted schedule).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or expression input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qwalk
