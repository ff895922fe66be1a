#pragma once

#include <stdexcept>
#include <string>

namespace pint {

/// Base of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures: the inputs were well-formed but the computation could
/// not produce a trustworthy answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

class ToleranceNotMet : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularTableau : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnknownScheme : public Error {
 public:
  using Error::Error;
};

class OrderMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DivergentFactor : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoThreshold : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MeshTooCoarse : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NewtonDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Invalid configuration. Carries the offending line (0 when not from a file)
/// and field name so the CLI can point at the problem.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {})
      : Error(format(message, line, field)), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& message, int line, const std::string& field) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + message;
  }

  int line_;
  std::string field_;
};

}  // namespace pint
