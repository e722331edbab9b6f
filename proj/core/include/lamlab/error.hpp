#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lamlab {

enum class ErrorKind {
  Syntax,
  Inseparable,
  NoNormalForm,
  FuelExhausted,  // indeterminate, never a refutation
  MalformedCode,
  OpenTerm,
  OutOfRange,
  InvalidProgram,
  Trap,
  UnknownLanguage,
  TypeMismatch,
  AssertionFailed,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for results that only mean "ran out of budget".
  bool indeterminate() const noexcept { return kind_ == ErrorKind::FuelExhausted; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorKind::Syntax, "syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace lamlab
