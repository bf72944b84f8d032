#pragma once

#include <stdexcept>
#include <string>

namespace optocool {

// Argument outside the supported domain of a model or special function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// r2 - dtilde <= 0: the operating point heats instead of cooling.
class NotCoolingError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnstableFixedPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoBifurcationError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace optocool
