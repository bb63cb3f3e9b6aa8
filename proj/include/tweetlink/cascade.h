#ifndef TWEETLINK_CASCADE_H_
#define TWEETLINK_CASCADE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tweetlink/corpus.h"
#include "tweetlink/matrix.h"

namespace tweetlink {

struct CascadeMember {
  std::string tweet_id;
  std::optional<std::string> parent_id;  // none for the root
  std::int64_t created_at = 0;

  bool operator==(const CascadeMember&) const = default;
};

// Rooted reply/quote tree. Members are kept in cut order: oldest first by
// (created_at, id), never placing a child before its parent.
class Cascade {
 public:
  // Members must already be in cut order and form a tree.
  explicit Cascade(std::vector<CascadeMember> members);

  const std::string& root_id() const { return members_.front().tweet_id; }
  const std::vector<CascadeMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::vector<std::string> member_ids() const;

  bool operator==(const Cascade&) const = default;

 private:
  std::vector<CascadeMember> members_;
};

// Builds one cascade per root. Tweets whose parent is absent from `tweets`
// become roots (with a warning on stderr). Throws kCycleDetected listing the
// tweets that never reach a root.
std::vector<Cascade> BuildCascades(const std::vector<Document>& tweets);

// The n oldest members; ancestor-closed. n >= size returns the cascade.
Cascade Cut(const Cascade& cascade, std::size_t n);

enum class AggregationFn { kMean, kMedian, kMax };

std::string_view ToString(AggregationFn fn);
AggregationFn ParseAggregation(std::string_view s);

// Element-wise mean / median / max across equal-length rows.
Vector Aggregate(std::span<const Vector> rows, AggregationFn fn);

// One JSON object per line: {"root_id": ..., "member_ids": [...]}.
std::string CascadesToJsonl(const std::vector<Cascade>& cascades);

}  // namespace tweetlink

#endif  // TWEETLINK_CASCADE_H_
