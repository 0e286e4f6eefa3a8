#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sponge {

enum class ErrorCode {
  BasesNotDecreasing,
  DigitOutOfRange,
  DigitLengthMismatch,
  EmptyDigitSet,
  DuplicateDigit,
  InvalidProbVector,
  AlphabetMismatch,
  InvalidPotential,
  InvalidProgram,
  NoFeasibleGridPoint,
  Infeasible,
  NotTwoDimensional,
  OutsideDomain,
  GridTooCoarse,
  ZeroProbabilityDigit,
  NotOneDimensional,
  InvalidArgument,
  Config,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BasesNotDecreasing: return "BasesNotDecreasing";
    case ErrorCode::DigitOutOfRange: return "DigitOutOfRange";
    case ErrorCode::DigitLengthMismatch: return "DigitLengthMismatch";
    case ErrorCode::EmptyDigitSet: return "EmptyDigitSet";
    case ErrorCode::DuplicateDigit: return "DuplicateDigit";
    case ErrorCode::InvalidProbVector: return "InvalidProbVector";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::InvalidPotential: return "InvalidPotential";
    case ErrorCode::InvalidProgram: return "InvalidProgram";
    case ErrorCode::NoFeasibleGridPoint: return "NoFeasibleGridPoint";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NotTwoDimensional: return "NotTwoDimensional";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::ZeroProbabilityDigit: return "ZeroProbabilityDigit";
    case ErrorCode::NotOneDimensional: return "NotOneDimensional";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sponge
