#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace accelsel {

// Root of every error the library raises. Each subclass maps to one failure
// class callers are expected to distinguish (the CLI maps them to exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DuplicateRecord : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class MissingDescriptor : public Error {
 public:
  using Error::Error;
};

class EmptyHistory : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  // 1-based line number for line-oriented formats, 0 when not applicable.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised when the budget filter leaves no candidate. min_cost is the cheapest
// estimated cost seen, so callers can report the shortfall.
class NoFeasibleMethod : public Error {
 public:
  NoFeasibleMethod(double min_cost, double budget);

  double min_cost() const { return min_cost_; }
  double budget() const { return budget_; }

 private:
  double min_cost_;
  double budget_;
};

}  // namespace accelsel
