#pragma once

#include <stdexcept>
#include <string>

namespace amolab {

enum class ErrorCode {
  PrecisionExhausted,
  NonGeneric,
  DepthOverflow,
  EnumerationCapExceeded,
  BudgetExceeded,
  HypothesisViolated,
  Singular,
  NotAnEigenfunctionLocally,
  DegenerateNodes,
  ScaleTooSmall,
  RangeExceeded,
  SiteTooResonant,
  DegenerateDenominator,
  InsufficientProfiles,
  NoTemperateDirection,
  WindowTooSmall,
  ConfigInvalid,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace amolab
