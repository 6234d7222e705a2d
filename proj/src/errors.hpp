#pragma once

#include <stdexcept>
#include <string>

namespace kerrnoise {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  Config = 2,
  Physics = 3,
  Numerics = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Invalid parameters, malformed input files, guard violations.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// The requested state does not exist (non-normalizable, disconnected ladder).
class PhysicsError : public Error {
 public:
  explicit PhysicsError(const std::string& what) : Error(ErrorKind::Physics, what) {}
};

/// Quadrature or integrator did not reach the requested tolerance.
class NumericsError : public Error {
 public:
  explicit NumericsError(const std::string& what) : Error(ErrorKind::Numerics, what) {}
};

}  // namespace kerrnoise
