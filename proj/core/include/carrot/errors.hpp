#pragma once

#include <stdexcept>
#include <string>

namespace carrot {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two points that must be distinct coincide within tolerance.
class DegenerateSegment : public Error {
 public:
  using Error::Error;
};

// Vehicle position coincides with the steering target.
class DegenerateTarget : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A configuration value violates a documented invariant (dt <= 0, ...).
class InvariantViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyTrajectory : public Error {
 public:
  using Error::Error;
};

class NonRectangularGrid : public Error {
 public:
  using Error::Error;
};

class EmptyData : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Text input that cannot be parsed; line is 1-based, 0 if not applicable.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

class UnknownKey : public ParseError {
 public:
  using ParseError::ParseError;
};

class TooFewWaypoints : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateConsecutiveWaypoint : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace carrot
