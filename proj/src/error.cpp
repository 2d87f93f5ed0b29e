// SPDX-License-Identifier: Apache-2.0
#include "bacc/error.hpp"

namespace bacc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::MalformedHeader: return "MalformedHeader";
  case ErrorCode::LatchesUnsupported: return "LatchesUnsupported";
  case ErrorCode::DanglingReference: return "DanglingReference";
  case ErrorCode::CycleDetected: return "CycleDetected";
  case ErrorCode::TooManyInputs: return "TooManyInputs";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
  case ErrorCode::GenerationFailure: return "GenerationFailure";
  case ErrorCode::EmptySplit: return "EmptySplit";
  case ErrorCode::EmptyEval: return "EmptyEval";
  case ErrorCode::SchemaMismatch: return "SchemaMismatch";
  case ErrorCode::MissingFile: return "MissingFile";
  case ErrorCode::ParseFailure: return "ParseFailure";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_user_error(ErrorCode code) {
  switch (code) {
  case ErrorCode::GenerationFailure:
  case ErrorCode::Internal:
    return false;
  default:
    return true;
  }
}

} // namespace bacc
