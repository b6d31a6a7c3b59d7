#include "specsel/error.hpp"

namespace specsel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::busy: return "busy";
    case ErrorCode::io: return "io_error";
    case ErrorCode::numeric: return "numeric_error";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

ParseError::ParseError(std::size_t position, const std::string& message)
    : Error(ErrorCode::parse,
            "syntax error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

}  // namespace specsel
