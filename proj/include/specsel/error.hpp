#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace specsel {

enum class ErrorCode {
  invalid_argument,  // caller broke a precondition
  parse,             // malformed text input
  out_of_range,      // wavelength or index outside the valid domain
  not_found,
  busy,
  io,
  numeric,           // non-finite values or solver breakdown
  internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message);

  /// Zero-based character offset of the offending token.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace specsel
