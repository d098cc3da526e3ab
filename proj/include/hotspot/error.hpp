#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hotspot {

enum class ErrorKind { io, parse, domain, convergence, calibration, usage };

const char* to_string(ErrorKind kind) noexcept;

// Base of every error raised by the library. The CLI maps kinds onto exit
// codes: io/usage -> 2, everything else -> 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::io, message) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error(ErrorKind::usage, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error(ErrorKind::domain, message) {}
};

// Line-level parse failure. line() is 1-based; 0 means "not tied to a line"
// (e.g. a malformed GeoJSON document).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual, int iterations)
      : Error(ErrorKind::convergence, message), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& message, std::size_t max_achievable)
      : Error(ErrorKind::calibration, message), max_achievable_(max_achievable) {}

  std::size_t max_achievable() const noexcept { return max_achievable_; }

 private:
  std::size_t max_achievable_;
};

}  // namespace hotspot
