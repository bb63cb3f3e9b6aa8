#include "tweetlink/cascade.h"

#include <algorithm>
#include <iostream>
#include <queue>
#include <unordered_map>

#include <json.hpp>

#include "tweetlink/error.h"

namespace tweetlink {

Cascade::Cascade(std::vector<CascadeMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::kEmptyInput, "cascade");
  if (members_.front().parent_id) {
    throw Error(ErrorCode::kInvalidArgument, "first member must be the root");
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& m = members_[i];
    if (i > 0) {
      if (!m.parent_id || !position.count(*m.parent_id)) {
        throw Error(ErrorCode::kInvalidArgument,
                    m.tweet_id + " does not follow its parent");
      }
    }
    if (!position.emplace(m.tweet_id, i).second) {
      throw Error(ErrorCode::kDuplicateId, m.tweet_id);
    }
  }
}

std::vector<std::string> Cascade::member_ids() const {
  std::vector<std::string> ids;
  ids.reserve(members_.size());
  for (const auto& m : members_) ids.push_back(m.tweet_id);
  return ids;
}

std::vector<Cascade> BuildCascades(const std::vector<Document>& tweets) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (tweets[i].kind != DocKind::kTweet) {
      throw Error(ErrorCode::kInvalidArgument, tweets[i].id + " is not a tweet");
    }
    if (!index.emplace(tweets[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateId, tweets[i].id);
    }
  }

  std::vector<std::vector<std::size_t>> children(tweets.size());
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const auto& parent = tweets[i].parent_id;
    auto it = parent ? index.find(*parent) : index.end();
    if (it == index.end()) {
      if (parent) {
        std::cerr << "warning: " << tweets[i].id << " has missing parent " << *parent
                  << "; promoted to root\n";
      }
      roots.push_back(i);
    } else {
      children[it->second].push_back(i);
    }
  }

  auto older = [&](std::size_t a, std::size_t b) {
    if (tweets[a].created_at != tweets[b].created_at) {
      return tweets[a].created_at < tweets[b].created_at;
    }
    return tweets[a].id < tweets[b].id;
  };
  std::sort(roots.begin(), roots.end(), older);

  std::vector<bool> visited(tweets.size(), false);
  std::vector<Cascade> cascades;
  for (std::size_t root : roots) {
    // Oldest-first expansion of the frontier keeps every prefix
    // ancestor-closed.
    auto cmp = [&](std::size_t a, std::size_t b) { return older(b, a); };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> frontier(cmp);
    frontier.push(root);
    std::vector<CascadeMember> members;
    while (!frontier.empty()) {
      const std::size_t i = frontier.top();
      frontier.pop();
      visited[i] = true;
      CascadeMember m{tweets[i].id, std::nullopt, tweets[i].created_at};
      if (i != root) m.parent_id = tweets[i].parent_id;
      if (m.parent_id) {
        const auto& parent = tweets[index.at(*m.parent_id)];
        if (parent.created_at > m.created_at) {
          std::cerr << "warning: " << m.tweet_id << " is older than its parent "
                    << parent.id << "\n";
        }
      }
      members.push_back(std::move(m));
      for (std::size_t c : children[i]) frontier.push(c);
    }
    cascades.emplace_back(std::move(members));
  }

  std::vector<std::string> stuck;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (!visited[i]) stuck.push_back(tweets[i].id);
  }
  if (!stuck.empty()) {
    std::sort(stuck.begin(), stuck.end());
    std::string ids;
    for (const auto& id : stuck) ids += (ids.empty() ? "" : ",") + id;
    throw Error(ErrorCode::kCycleDetected, ids);
  }
  return cascades;
}

Cascade Cut(const Cascade& cascade, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "cut size must be >= 1");
  if (n >= cascade.size()) return cascade;
  return Cascade(std::vector<CascadeMember>(cascade.members().begin(),
                                            cascade.members().begin() + n));
}

std::string_view ToString(AggregationFn fn) {
  switch (fn) {
    case AggregationFn::kMean: return "mean";
    case AggregationFn::kMedian: return "median";
    case AggregationFn::kMax: return "max";
  }
  return "mean";
}

AggregationFn ParseAggregation(std::string_view s) {
  if (s == "mean") return AggregationFn::kMean;
  if (s == "median") return AggregationFn::kMedian;
  if (s == "max") return AggregationFn::kMax;
  throw Error(ErrorCode::kConfigInvalid, "aggregation '" + std::string(s) + "'");
}

Vector Aggregate(std::span<const Vector> rows, AggregationFn fn) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "aggregate");
  const std::size_t width = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != width) throw Error(ErrorCode::kRaggedRows, "aggregate");
  }
  Vector out(width);
  Vector column(rows.size());
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][j];
    switch (fn) {
      case AggregationFn::kMean: {
        double sum = 0.0;
        for (double v : column) sum += v;
        out[j] = sum / static_cast<double>(column.size());
        break;
      }
      case AggregationFn::kMedian: {
        std::sort(column.begin(), column.end());
        const std::size_t mid = column.size() / 2;
        out[j] = column.size() % 2 == 1 ? column[mid]
                                        : (column[mid - 1] + column[mid]) / 2.0;
        break;
      }
      case AggregationFn::kMax:
        out[j] = *std::max_element(column.begin(), column.end());
        break;
    }
  }
  return out;
}

std::string CascadesToJsonl(const std::vector<Cascade>& cascades) {
  std::string out;
  for (const auto& c : cascades) {
    nlohmann::ordered_json j;
    j["root_id"] = c.root_id();
    j["member_ids"] = c.member_ids();
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace tweetlink
