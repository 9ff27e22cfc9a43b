#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fjs {

using Time = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance or solution text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), message_(message), line_(line) {}

  int line() const noexcept { return line_; }
  /// The message without the line prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  int line_;
};

/// A directed cycle was found where the model requires a DAG.
class CycleError : public Error {
 public:
  using Error::Error;
};

/// The exhaustive solver refused an instance that exceeds its enumeration limit.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace fjs
