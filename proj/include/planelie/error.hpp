#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace planelie {

enum class ErrorCode {
  NegativeExponent,
  Parse,
  NonZeroDivergence,
  BracketNotConstant,
  DegenerateSpan,
  ZeroScale,
  NotClosed,
  NotEtale,
  NotAnAutomorphism,
  CapExceeded,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeExponent: return "NegativeExponent";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::NonZeroDivergence: return "NonZeroDivergence";
    case ErrorCode::BracketNotConstant: return "BracketNotConstant";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotEtale: return "NotEtale";
    case ErrorCode::NotAnAutomorphism: return "NotAnAutomorphism";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Domain error raised by library operations. The code identifies the
/// failure kind; the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected, std::string_view input)
      : Error(ErrorCode::Parse, "at position " + std::to_string(position) + ": expected " +
                                    expected + " in '" + std::string(input) + "'"),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace planelie
