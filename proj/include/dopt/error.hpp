#pragma once

#include <stdexcept>
#include <string>

namespace dopt {

enum class ErrorCode {
  kInvalidIndex = 1,
  kModeViolation,
  kDimensionError,
  kSingularGram,
  kInvalidOrder,
  kDegenerateNodes,
  kInfeasibleRank,
  kNotRationalized,
  kUnreachableCondition,
  kInvalidParams,
  kTooLarge,
  kParseError,
  kIoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dopt
