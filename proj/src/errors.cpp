#include "gsk/errors.hpp"

namespace gsk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::EmptyNodeSet: return "EmptyNodeSet";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::MultipleZeroEigenvalues: return "MultipleZeroEigenvalues";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::FullVertexSet: return "FullVertexSet";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InconsistentDimensions: return "InconsistentDimensions";
    case ErrorCode::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::NonNumericColumn: return "NonNumericColumn";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::EigensolverFailure:
    case ErrorCode::MultipleZeroEigenvalues:
    case ErrorCode::SingularSystem:
    case ErrorCode::InsufficientData:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Input;
  }
}

}  // namespace gsk
