#include "kath/error.hpp"

namespace kath {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadFieldCount: return "BAD_FIELD_COUNT";
    case ErrorCode::kInvalidUtf8: return "INVALID_UTF8";
    case ErrorCode::kSchemaParseError: return "SCHEMA_PARSE_ERROR";
    case ErrorCode::kEmptyLabelSet: return "EMPTY_LABEL_SET";
    case ErrorCode::kUnmatchedRetry: return "UNMATCHED_RETRY";
    case ErrorCode::kAlignmentMismatch: return "ALIGNMENT_MISMATCH";
    case ErrorCode::kEmptyEvaluation: return "EMPTY_EVALUATION";
    case ErrorCode::kEmptyTrainingSet: return "EMPTY_TRAINING_SET";
    case ErrorCode::kNoValidSentences: return "NO_VALID_SENTENCES";
    case ErrorCode::kStateCorrupt: return "STATE_CORRUPT";
    case ErrorCode::kUnknownRetryId: return "UNKNOWN_RETRY_ID";
    case ErrorCode::kBadModelFile: return "BAD_MODEL_FILE";
    case ErrorCode::kPrecondition: return "PRECONDITION";
    case ErrorCode::kIo: return "IO_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace kath
