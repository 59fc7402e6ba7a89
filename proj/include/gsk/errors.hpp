#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsk {

enum class ErrorCode {
  // graph construction and queries
  InvalidArgument,
  DisconnectedGraph,
  NonPositiveWeight,
  NonPositiveLength,
  SelfLoop,
  DuplicateEdge,
  TooFewVertices,
  DuplicatePoint,
  EmptyNodeSet,
  // spectral
  IsolatedVertex,
  EigensolverFailure,
  MultipleZeroEigenvalues,
  NonPositiveAlpha,
  EmptySubset,
  DimensionMismatch,
  EmptyInterior,
  FullVertexSet,
  // interpolation
  SingularSystem,
  InconsistentDimensions,
  EmptyNeighborhood,
  // diagnostics
  InsufficientData,
  NotACycle,
  TooFewNodes,
  HypothesisViolated,
  // datasets / io
  MissingValue,
  NonNumericColumn,
  FileNotFound,
  ZeroVarianceColumn,
  TooFewRows,
  ParseError,
};

// Coarse grouping used by the CLI to pick an exit code.
enum class ErrorCategory { Input, Numerical };

std::string_view to_string(ErrorCode code);
ErrorCategory category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gsk
