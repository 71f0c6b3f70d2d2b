#include "aniso/error.hpp"

namespace aniso {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOriginNotInterior: return "OriginNotInterior";
    case ErrorCode::kDegenerateBody: return "DegenerateBody";
    case ErrorCode::kNonPositiveScale: return "NonPositiveScale";
    case ErrorCode::kDepthTooLarge: return "DepthTooLarge";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kInvalidSet: return "InvalidSet";
    case ErrorCode::kSelfIntersecting: return "SelfIntersecting";
    case ErrorCode::kGridTooSmall: return "GridTooSmall";
    case ErrorCode::kRadiusBelowResolution: return "RadiusBelowResolution";
    case ErrorCode::kRadiusExceedsPadding: return "RadiusExceedsPadding";
    case ErrorCode::kInsufficientOctaves: return "InsufficientOctaves";
    case ErrorCode::kSOutOfRange: return "SOutOfRange";
    case ErrorCode::kRangeTooNarrow: return "RangeTooNarrow";
    case ErrorCode::kMismatchedReports: return "MismatchedReports";
    case ErrorCode::kOverlappingParts: return "OverlappingParts";
    case ErrorCode::kRadiusOutsideValidity: return "RadiusOutsideValidity";
    case ErrorCode::kNonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace aniso
