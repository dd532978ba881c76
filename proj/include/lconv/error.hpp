#pragma once

#include <stdexcept>
#include <string>

namespace converse {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  InsufficientTruncation = 3,
  Numeric = 4,
  FunctionalEquation = 5,
  Io = 6,
};

/// Base exception for everything the library throws on purpose. The code maps
/// one-to-one onto the status values of the C interface.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::InvalidArgument, what) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t row = 0)
      : Error(ErrorCode::Parse, row ? "row " + std::to_string(row) + ": " + what : what),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

/// Raised when a truncated sum cannot meet the requested precision.
/// `minimal_terms` is an estimate of the truncation that would.
class InsufficientTruncation : public Error {
public:
  InsufficientTruncation(const std::string& what, std::size_t minimal_terms)
      : Error(ErrorCode::InsufficientTruncation, "insufficient truncation: " + what),
        minimal_terms_(minimal_terms) {}
  std::size_t minimal_terms() const noexcept { return minimal_terms_; }

private:
  std::size_t minimal_terms_;
};

class NumericError : public Error {
public:
  explicit NumericError(const std::string& what) : Error(ErrorCode::Numeric, what) {}
};

}  // namespace converse
