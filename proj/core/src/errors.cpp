#include "lipgm/errors.hpp"

namespace lipgm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StructureMismatch: return "StructureMismatch";
    case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::UnnormalizableFeatureMap: return "UnnormalizableFeatureMap";
    case ErrorCode::FeatureBoundViolated: return "FeatureBoundViolated";
    case ErrorCode::DeclaredBoundViolated: return "DeclaredBoundViolated";
    case ErrorCode::MissingLagValues: return "MissingLagValues";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::MalformedField: return "MalformedField";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace lipgm
