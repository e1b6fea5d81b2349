#pragma once

#include <stdexcept>
#include <string>

namespace pathgauge {

enum class ErrorCode {
  TagMismatch,
  NonFinite,
  LogDomain,
  TauNotInvertible,
  FieldEvaluation,
  GridMismatch,
  IndexOutOfRange,
  VariationTooCoarse,
  NotDiffeo,
  ConditionViolated,
  NotComposable,
  NotQuasiFlat,
  ConfigParse,
  UnknownTask,
  UnknownFamily,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathgauge
