#pragma once

#include <stdexcept>
#include <string>

namespace dgforge {

enum class ErrorKind {
  DimensionMismatch,
  InvalidField,
  InvalidAlgebra,
  InvalidModule,
  InvalidTwisted,
  ClassPRequired,
  Precondition,
  Schema,
  FileNotFound,
  Internal,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the engine carries a kind so the CLI can emit a
// structured error report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dgforge
