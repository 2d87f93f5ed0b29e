// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bacc {

enum class ErrorCode {
  MalformedHeader = 1,
  LatchesUnsupported,
  DanglingReference,
  CycleDetected,
  TooManyInputs,
  DimensionMismatch,
  SearchBudgetExceeded,
  GenerationFailure,
  EmptySplit,
  EmptyEval,
  SchemaMismatch,
  MissingFile,
  ParseFailure,
  InvalidArgument,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by bad user input (files, flags, dimensions).
bool is_user_error(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

} // namespace bacc
