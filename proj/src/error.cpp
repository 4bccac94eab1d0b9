#include "sep4/error.hpp"
#include "sep4/tolerance.hpp"

#include <cmath>

namespace sep4 {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotPositive: return "NotPositive";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kEigFailure: return "EigFailure";
    case ErrorCode::kAllPartiesTrivial: return "AllPartiesTrivial";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kNotBipartite: return "NotBipartite";
    case ErrorCode::kRankDeficientBasis: return "RankDeficientBasis";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kUnsupportedSystem: return "UnsupportedSystem";
    case ErrorCode::kNotBijective: return "NotBijective";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kWrongDimension: return "WrongDimension";
    case ErrorCode::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kNotSeparableVerdict: return "NotSeparableVerdict";
    case ErrorCode::kDependentVectors: return "DependentVectors";
    case ErrorCode::kDegenerateComplement: return "DegenerateComplement";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

void ToleranceConfig::validate() const {
  for (double t : {tol_herm, tol_psd, tol_rank, tol_orth, tol_recon, tol_product, tol_chow}) {
    if (!std::isfinite(t) || t < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "tolerances must be finite and nonnegative");
    }
  }
}

}  // namespace sep4
