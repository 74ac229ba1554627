#pragma once

#include <stdexcept>
#include <string>

namespace contest {

/// Base class of every error the engine raises. `exit_code()` is the process
/// status the CLI returns when the error escapes a command.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateOutcomeError : public Error {
 public:
  using Error::Error;
};

class StratificationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFitError : public Error {
 public:
  using Error::Error;
};

class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

class EnumerationBudgetError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class SimulationBudgetError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class CommitmentMismatch : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

}  // namespace contest
