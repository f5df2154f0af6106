#pragma once

#include <stdexcept>
#include <string>

namespace genspectra {

enum class ErrorCode {
  DimensionMismatch,
  NonFinite,
  NotSymmetric,
  InvalidArgument,
  SingularMatrix,
  ConvergenceFailure,
  UnsupportedDimension,
  NoNullSpace,
  SingularAfterRegularization,
  IndefiniteB,
  ComplexEigenvalues,
  ZeroVector,
  DegenerateDenominator,
  NonOrthonormalBasis,
  MissingLabels,
  SingleClass,
  EmptyFile,
  RaggedRows,
  NonNumericCell,
  MissingLabelColumn,
  DuplicateColumn,
  IoError,
};

const char* error_code_name(ErrorCode code) noexcept;

// Numerical failures are the ones a caller cannot fix by correcting input
// shape or syntax.
bool is_numerical_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace genspectra
