#pragma once

#include <stdexcept>
#include <string>

namespace qtime {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax or semantic error while parsing an OpenQASM source.
/// Carries the 1-based line and column of the offending token.
class ParseError : public Error {
  public:
    ParseError(std::string message, int line, int col)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " +
                message),
          line_(line),
          col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_;
    int col_;
};

/// Malformed or inconsistent data file (manifest, calibration, weight container).
class DataError : public Error {
  public:
    explicit DataError(const std::string& what) : Error(what) {}
};

/// Violated call contract (bad dimensions, out-of-range argument).
class ContractError : public Error {
  public:
    explicit ContractError(const std::string& what) : Error(what) {}
};

}  // namespace qtime
