#pragma once

#include <stdexcept>
#include <string>

namespace dlrkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingVariableError : Error {
  explicit MissingVariableError(const std::string& what) : Error(what) {}
};

struct SizeLimitError : Error {
  explicit SizeLimitError(const std::string& what) : Error(what) {}
};

struct StrictNotSupportedError : Error {
  explicit StrictNotSupportedError(const std::string& what) : Error(what) {}
};

struct EmptyInputError : Error {
  explicit EmptyInputError(const std::string& what) : Error(what) {}
};

struct AllZeroCoefficientsError : Error {
  explicit AllZeroCoefficientsError(const std::string& what) : Error(what) {}
};

struct WitnessNotInRelationError : Error {
  explicit WitnessNotInRelationError(const std::string& what) : Error(what) {}
};

struct NoExcludedIntervalError : Error {
  explicit NoExcludedIntervalError(const std::string& what) : Error(what) {}
};

struct ConditionViolatedError : Error {
  explicit ConditionViolatedError(const std::string& what) : Error(what) {}
};

struct InvalidParamsError : Error {
  explicit InvalidParamsError(const std::string& what) : Error(what) {}
};

// Raised when a computed certificate fails its own re-verification; this is a
// bug in the library, never a property of the input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

struct SyntaxError : Error {
  int line;
  int column;
  std::string expected;
  SyntaxError(int line_, int column_, const std::string& expected_)
      : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(column_) +
              ": expected " + expected_),
        line(line_),
        column(column_),
        expected(expected_) {}
};

}  // namespace dlrkit
