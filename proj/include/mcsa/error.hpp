#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcsa {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid configuration (bad shapes, aliasing, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid n-schedule for a harmonic order.
class ScheduleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Text input that could not be parsed; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A predicted grid does not cover every harmonic order of a fixture.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<int> missing_k)
      : Error(what), missing_k_(std::move(missing_k)) {}
  const std::vector<int>& missing_k() const noexcept { return missing_k_; }

 private:
  std::vector<int> missing_k_;
};

/// Violation of the LPT nibble read protocol.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public TrainingError {
 public:
  explicit DivergenceError(int epoch)
      : TrainingError("training diverged (non-finite loss) at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace mcsa
