// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace parlog {

enum class ErrorKind {
  VariableMismatch,
  ZeroSeries,
  NonIntegralExponent,
  TruncationExhausted,
  NotParahoric,
  ResidueConditionViolated,
  ParabolicConditionViolated,
  InvalidInput,
  Unsupported,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::VariableMismatch: return "VariableMismatch";
    case ErrorKind::ZeroSeries: return "ZeroSeries";
    case ErrorKind::NonIntegralExponent: return "NonIntegralExponent";
    case ErrorKind::TruncationExhausted: return "TruncationExhausted";
    case ErrorKind::NotParahoric: return "NotParahoric";
    case ErrorKind::ResidueConditionViolated: return "ResidueConditionViolated";
    case ErrorKind::ParabolicConditionViolated: return "ParabolicConditionViolated";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

/// All library failures carry a kind so callers (and the CLI exit-code
/// mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace parlog
