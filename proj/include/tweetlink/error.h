#ifndef TWEETLINK_ERROR_H_
#define TWEETLINK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tweetlink {

enum class ErrorCode {
  kInvalidArgument,
  kMalformedLine,
  kDuplicateId,
  kMissingField,
  kEmptyArticle,
  kUnknownId,
  kConflictingLabel,
  kEmptyInput,
  kEmptyCorpus,
  kDegenerateK,
  kDimMismatch,
  kMissingEmbedding,
  kNoNegativesAvailable,
  kNonFiniteLoss,
  kEmptyChunkList,
  kNoLabeledCells,
  kNoPositives,
  kCycleDetected,
  kRaggedRows,
  kShapeMismatch,
  kUnequalRaterCounts,
  kDegenerateAgreement,
  kConfigInvalid,
  kEmptyGrid,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; callers
// branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace tweetlink

#endif  // TWEETLINK_ERROR_H_
