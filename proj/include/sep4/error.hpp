#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sep4 {

enum class ErrorCode {
  kDimensionMismatch = 1,
  kNotHermitian,
  kNotPositive,
  kEmptySubset,
  kEigFailure,
  kAllPartiesTrivial,
  kZeroVector,
  kNotBipartite,
  kRankDeficientBasis,
  kDuplicateIndex,
  kUnsupportedSystem,
  kNotBijective,
  kShapeMismatch,
  kWrongDimension,
  kDegenerateConfiguration,
  kNotApplicable,
  kNotSeparableVerdict,
  kDependentVectors,
  kDegenerateComplement,
  kParseError,
  kInvalidArgument,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // what() without the code prefix
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace sep4
