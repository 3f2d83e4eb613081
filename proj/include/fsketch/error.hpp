#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsketch {

enum class ErrorKind {
  kInvalidParameter,
  kInvalidElement,
  kIncompatibleSketch,
  kNumericFailure,
  kEmptySample,
  kIncompleteSecondPass,
  kLineError,
  kFormat,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (and the CLI exit path) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kInvalidElement: return "invalid-element";
    case ErrorKind::kIncompatibleSketch: return "incompatible-sketch";
    case ErrorKind::kNumericFailure: return "numeric-failure";
    case ErrorKind::kEmptySample: return "empty-sample";
    case ErrorKind::kIncompleteSecondPass: return "incomplete-second-pass";
    case ErrorKind::kLineError: return "line-error";
    case ErrorKind::kFormat: return "format-error";
  }
  return "error";
}

}  // namespace fsketch
