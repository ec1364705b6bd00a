#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kath {

enum class ErrorCode {
  kBadFieldCount,
  kInvalidUtf8,
  kSchemaParseError,
  kEmptyLabelSet,
  kUnmatchedRetry,
  kAlignmentMismatch,
  kEmptyEvaluation,
  kEmptyTrainingSet,
  kNoValidSentences,
  kStateCorrupt,
  kUnknownRetryId,
  kBadModelFile,
  kPrecondition,
  kIo,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kath
