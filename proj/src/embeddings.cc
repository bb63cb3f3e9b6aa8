#include <cmath>

#include "tweetlink/error.h"
#include "tweetlink/io.h"
#include "tweetlink/vectorize.h"

namespace tweetlink {

EmbeddingTable EmbeddingTable::Parse(std::string_view jsonl) {
  EmbeddingTable table;
  std::size_t line_no = 0;
  for (auto line : SplitLines(jsonl)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    auto obj = nlohmann::json::parse(line, nullptr, false);
    const std::string where = "line " + std::to_string(line_no);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
        !obj["id"].is_string() || !obj.contains("vector") ||
        !obj["vector"].is_array() || obj["vector"].empty()) {
      throw Error(ErrorCode::kMalformedLine, where);
    }
    Vector vec;
    for (const auto& x : obj["vector"]) {
      if (!x.is_number()) throw Error(ErrorCode::kMalformedLine, where);
      vec.push_back(x.get<double>());
      if (!std::isfinite(vec.back())) throw Error(ErrorCode::kMalformedLine, where);
    }
    table.Add(obj["id"].get<std::string>(), std::move(vec));
  }
  return table;
}

EmbeddingTable EmbeddingTable::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

void EmbeddingTable::Add(const std::string& id, Vector vec) {
  if (table_.empty()) {
    dim_ = vec.size();
  } else if (vec.size() != dim_) {
    throw Error(ErrorCode::kDimMismatch, id);
  }
  if (!table_.emplace(id, std::move(vec)).second) {
    throw Error(ErrorCode::kDuplicateId, id);
  }
}

const Vector& EmbeddingTable::at(const std::string& id) const {
  auto it = table_.find(id);
  if (it == table_.end()) throw Error(ErrorCode::kMissingEmbedding, id);
  return it->second;
}

}  // namespace tweetlink
