#include "genspectra/error.hpp"

namespace genspectra {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NoNullSpace: return "NoNullSpace";
    case ErrorCode::SingularAfterRegularization: return "SingularAfterRegularization";
    case ErrorCode::IndefiniteB: return "IndefiniteB";
    case ErrorCode::ComplexEigenvalues: return "ComplexEigenvalues";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NonOrthonormalBasis: return "NonOrthonormalBasis";
    case ErrorCode::MissingLabels: return "MissingLabels";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::IndefiniteB:
    case ErrorCode::SingularAfterRegularization:
    case ErrorCode::ComplexEigenvalues:
      return true;
    default:
      return false;
  }
}

}  // namespace genspectra
