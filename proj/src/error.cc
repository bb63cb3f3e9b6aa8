#include "tweetlink/error.h"

namespace tweetlink {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kEmptyArticle: return "EmptyArticle";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kConflictingLabel: return "ConflictingLabel";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDegenerateK: return "DegenerateK";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kNoNegativesAvailable: return "NoNegativesAvailable";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kEmptyChunkList: return "EmptyChunkList";
    case ErrorCode::kNoLabeledCells: return "NoLabeledCells";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kRaggedRows: return "RaggedRows";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kUnequalRaterCounts: return "UnequalRaterCounts";
    case ErrorCode::kDegenerateAgreement: return "DegenerateAgreement";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) +
                         (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(detail) {}

}  // namespace tweetlink
