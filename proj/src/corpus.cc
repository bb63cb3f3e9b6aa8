#include "tweetlink/corpus.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tweetlink/error.h"
#include "tweetlink/io.h"
#include "tweetlink/random.h"
#include "utf8.h"

namespace tweetlink {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string LineRef(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

json ParseLine(std::string_view line, std::size_t line_no) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(ErrorCode::kMalformedLine, LineRef(line_no));
  }
  return obj;
}

std::string RequireString(const json& obj, const char* field,
                          std::size_t line_no) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    throw Error(ErrorCode::kMissingField,
                std::string(field) + " at " + LineRef(line_no));
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::kMalformedLine,
                std::string(field) + " is not a string at " + LineRef(line_no));
  }
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json& obj, const char* field,
                                          std::size_t line_no) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kMalformedLine,
                std::string(field) + " is not a string at " + LineRef(line_no));
  }
  return it->get<std::string>();
}

DocKind ParseDocKind(const std::string& s, std::size_t line_no) {
  if (s == "tweet") return DocKind::kTweet;
  if (s == "article") return DocKind::kArticle;
  throw Error(ErrorCode::kMalformedLine, "kind '" + s + "' at " + LineRef(line_no));
}

ParentKind ParseParentKind(const std::string& s, std::size_t line_no) {
  if (s == "reply") return ParentKind::kReply;
  if (s == "quote") return ParentKind::kQuote;
  throw Error(ErrorCode::kMalformedLine,
              "parent_kind '" + s + "' at " + LineRef(line_no));
}

PairLabel ParsePairLabel(const std::string& s, std::size_t line_no) {
  if (s == "match") return PairLabel::kMatch;
  if (s == "no_match") return PairLabel::kNoMatch;
  if (s == "unknown") return PairLabel::kUnknown;
  throw Error(ErrorCode::kMalformedLine, "label '" + s + "' at " + LineRef(line_no));
}

Verdict ParseVerdict(const std::string& s, std::size_t line_no) {
  if (s == "match") return Verdict::kMatch;
  if (s == "no_match") return Verdict::kNoMatch;
  if (s == "skip") return Verdict::kSkip;
  throw Error(ErrorCode::kMalformedLine,
              "verdict '" + s + "' at " + LineRef(line_no));
}

template <typename Fn>
void ForEachJsonLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    fn(ParseLine(line, line_no), line_no);
  }
}

}  // namespace

std::string_view ToString(DocKind kind) {
  return kind == DocKind::kTweet ? "tweet" : "article";
}

std::string_view ToString(ParentKind kind) {
  switch (kind) {
    case ParentKind::kNone: return "none";
    case ParentKind::kReply: return "reply";
    case ParentKind::kQuote: return "quote";
  }
  return "none";
}

std::string_view ToString(PairLabel label) {
  switch (label) {
    case PairLabel::kMatch: return "match";
    case PairLabel::kNoMatch: return "no_match";
    case PairLabel::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view ToString(Verdict verdict) {
  switch (verdict) {
    case Verdict::kMatch: return "match";
    case Verdict::kNoMatch: return "no_match";
    case Verdict::kSkip: return "skip";
  }
  return "skip";
}

KeywordList::KeywordList(std::vector<std::string> entries) {
  for (auto& e : entries) {
    std::string lowered = utf8::ToLower(e);
    auto first = lowered.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = lowered.find_last_not_of(" \t\r");
    entries_.push_back(lowered.substr(first, last - first + 1));
  }
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  if (entries_.empty()) throw Error(ErrorCode::kEmptyInput, "keyword list");
}

bool KeywordList::Contains(std::string_view token) const {
  return std::binary_search(entries_.begin(), entries_.end(), token);
}

std::vector<Document> ParseDocuments(std::string_view jsonl,
                                     std::optional<DocKind> kind) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  ForEachJsonLine(jsonl, [&](const json& obj, std::size_t line_no) {
    Document doc;
    doc.id = RequireString(obj, "id", line_no);
    if (doc.id.empty()) {
      throw Error(ErrorCode::kMalformedLine, "empty id at " + LineRef(line_no));
    }
    if (obj.contains("kind")) {
      doc.kind = ParseDocKind(RequireString(obj, "kind", line_no), line_no);
      if (kind && *kind != doc.kind) {
        throw Error(ErrorCode::kMalformedLine,
                    "expected " + std::string(ToString(*kind)) + " at " +
                        LineRef(line_no));
      }
    } else if (kind) {
      doc.kind = *kind;
    } else {
      throw Error(ErrorCode::kMissingField, "kind at " + LineRef(line_no));
    }
    doc.text = RequireString(obj, "text", line_no);
    doc.summary = OptionalString(obj, "summary", line_no);
    auto ts = obj.find("created_at");
    if (ts == obj.end() || ts->is_null()) {
      throw Error(ErrorCode::kMissingField, "created_at at " + LineRef(line_no));
    }
    if (!ts->is_number_integer()) {
      throw Error(ErrorCode::kMalformedLine,
                  "created_at is not an integer at " + LineRef(line_no));
    }
    doc.created_at = ts->get<std::int64_t>();
    doc.parent_id = OptionalString(obj, "parent_id", line_no);
    auto parent_kind = OptionalString(obj, "parent_kind", line_no);
    if (doc.parent_id) {
      if (doc.kind != DocKind::kTweet) {
        throw Error(ErrorCode::kMalformedLine,
                    "article with parent at " + LineRef(line_no));
      }
      if (!parent_kind) {
        throw Error(ErrorCode::kMissingField,
                    "parent_kind at " + LineRef(line_no));
      }
      doc.parent_kind = ParseParentKind(*parent_kind, line_no);
    } else if (parent_kind && *parent_kind != "none") {
      throw Error(ErrorCode::kMalformedLine,
                  "parent_kind without parent_id at " + LineRef(line_no));
    }
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorCode::kDuplicateId, doc.id);
    }
    docs.push_back(std::move(doc));
  });
  return docs;
}

std::vector<Document> LoadDocuments(const std::filesystem::path& path,
                                    std::optional<DocKind> kind) {
  return ParseDocuments(ReadFile(path), kind);
}

std::vector<LinkedPair> LoadPairs(const std::filesystem::path& path) {
  std::vector<LinkedPair> pairs;
  ForEachJsonLine(ReadFile(path), [&](const json& obj, std::size_t line_no) {
    LinkedPair pair;
    pair.tweet_id = RequireString(obj, "tweet_id", line_no);
    pair.article_id = RequireString(obj, "article_id", line_no);
    pair.label = ParsePairLabel(RequireString(obj, "label", line_no), line_no);
    pairs.push_back(std::move(pair));
  });
  return pairs;
}

std::vector<AnnotationRecord> LoadAnnotations(
    const std::filesystem::path& path) {
  std::vector<AnnotationRecord> records;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  ForEachJsonLine(ReadFile(path), [&](const json& obj, std::size_t line_no) {
    AnnotationRecord rec;
    rec.tweet_id = RequireString(obj, "tweet_id", line_no);
    rec.article_id = RequireString(obj, "article_id", line_no);
    rec.annotator_id = RequireString(obj, "annotator_id", line_no);
    rec.verdict = ParseVerdict(RequireString(obj, "verdict", line_no), line_no);
    if (!seen.emplace(rec.tweet_id, rec.article_id, rec.annotator_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  rec.tweet_id + "/" + rec.article_id + "/" + rec.annotator_id);
    }
    records.push_back(std::move(rec));
  });
  return records;
}

KeywordList LoadKeywords(const std::filesystem::path& path) {
  std::vector<std::string> entries;
  for (auto line : SplitLines(ReadFile(path))) entries.emplace_back(line);
  return KeywordList(std::move(entries));
}

std::string SerializeDocuments(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    ordered_json obj;
    obj["id"] = doc.id;
    obj["kind"] = ToString(doc.kind);
    obj["text"] = doc.text;
    if (doc.summary) obj["summary"] = *doc.summary;
    obj["created_at"] = doc.created_at;
    if (doc.parent_id) {
      obj["parent_id"] = *doc.parent_id;
      obj["parent_kind"] = ToString(doc.parent_kind);
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::string SerializePairs(const std::vector<LinkedPair>& pairs) {
  std::string out;
  for (const auto& pair : pairs) {
    ordered_json obj;
    obj["tweet_id"] = pair.tweet_id;
    obj["article_id"] = pair.article_id;
    obj["label"] = ToString(pair.label);
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::string ExtractSummary(const Document& article, std::size_t max_chars) {
  if (article.kind != DocKind::kArticle) {
    throw Error(ErrorCode::kInvalidArgument, article.id + " is not an article");
  }
  if (article.summary) return *article.summary;
  if (article.text.empty()) throw Error(ErrorCode::kEmptyArticle, article.id);
  std::string_view text = article.text;
  std::size_t blank = text.find("\n\n");
  std::string_view para = text.substr(0, blank);
  // A text that opens with a blank line would yield nothing.
  if (para.empty()) para = text;
  auto cps = utf8::Decode(para);
  if (max_chars > 0 && cps.size() > max_chars) {
    // Cut at a code point boundary of the original bytes.
    std::size_t bytes = 0;
    std::size_t count = 0;
    while (count < max_chars && bytes < para.size()) {
      const auto b = static_cast<unsigned char>(para[bytes]);
      std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3
                                     : (b >> 3) == 0x1E ? 4 : 1;
      bytes = std::min(para.size(), bytes + len);
      ++count;
    }
    para = para.substr(0, bytes);
  }
  return std::string(para);
}

std::vector<std::string> KeywordTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && current != "#") tokens.push_back(current);
    current.clear();
  };
  for (char32_t cp : utf8::Decode(text)) {
    cp = utf8::ToLower(cp);
    const bool word = utf8::IsLetter(cp) || (cp >= '0' && cp <= '9') || cp == '_';
    if (word) {
      utf8::Append(current, cp);
    } else if (cp == '#' && current.empty()) {
      current = "#";
    } else {
      flush();
      if (cp == '#') current = "#";
    }
  }
  flush();
  return tokens;
}

std::vector<Document> KeywordFilter(const std::vector<Document>& docs,
                                    const KeywordList& keywords) {
  std::vector<Document> kept;
  for (const auto& doc : docs) {
    for (const auto& token : KeywordTokens(doc.text)) {
      if (keywords.Contains(token)) {
        kept.push_back(doc);
        break;
      }
    }
  }
  return kept;
}

GroundTruthMatrix BuildGroundTruth(
    const std::vector<LinkedPair>& pairs,
    const std::vector<std::string>& tweet_ids,
    const std::vector<std::string>& article_ids) {
  std::unordered_map<std::string, std::size_t> row_of;
  std::unordered_map<std::string, std::size_t> col_of;
  for (std::size_t i = 0; i < tweet_ids.size(); ++i) row_of.emplace(tweet_ids[i], i);
  for (std::size_t j = 0; j < article_ids.size(); ++j) col_of.emplace(article_ids[j], j);

  GroundTruthMatrix gt{tweet_ids, article_ids,
                       Grid<int>(tweet_ids.size(), article_ids.size(), 0)};
  std::map<std::pair<std::size_t, std::size_t>, PairLabel> assigned;
  for (const auto& pair : pairs) {
    auto r = row_of.find(pair.tweet_id);
    if (r == row_of.end()) throw Error(ErrorCode::kUnknownId, pair.tweet_id);
    auto c = col_of.find(pair.article_id);
    if (c == col_of.end()) throw Error(ErrorCode::kUnknownId, pair.article_id);
    auto [it, inserted] = assigned.emplace(std::make_pair(r->second, c->second),
                                           pair.label);
    if (!inserted && it->second != pair.label) {
      throw Error(ErrorCode::kConflictingLabel,
                  pair.tweet_id + "/" + pair.article_id);
    }
    int value = 0;
    if (pair.label == PairLabel::kMatch) value = 1;
    if (pair.label == PairLabel::kNoMatch) value = -1;
    gt.values(r->second, c->second) = value;
  }
  return gt;
}

std::string SynthWord(int index) {
  static constexpr std::string_view kConsonants = "bcdfghjklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  constexpr int kSyllables = kConsonants.size() * kVowels.size();
  std::string word;
  int rest = index;
  for (int i = 0; i < 3; ++i) {
    const int s = rest % kSyllables;
    rest /= kSyllables;
    word += kConsonants[s / kVowels.size()];
    word += kVowels[s % kVowels.size()];
  }
  return word;
}

SynthCorpus Synthesize(const SynthConfig& cfg) {
  if (cfg.n_topics < 1 || cfg.n_articles < 1 || cfg.tweets_per_article < 1 ||
      cfg.vocab_per_topic < 1 || cfg.lead_words < 1 || cfg.body_words < 0 ||
      cfg.tweet_words < 1) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic corpus counts must be >= 1");
  }
  Rng rng(cfg.seed);
  auto topic_word = [&](int topic) {
    return SynthWord(topic * cfg.vocab_per_topic +
                     static_cast<int>(UniformIndex(rng, cfg.vocab_per_topic)));
  };
  auto sentence = [&](int topic, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) {
      if (i > 0) s += ' ';
      s += topic_word(topic);
    }
    return s;
  };
  auto pad_id = [](const char* prefix, int i, int width) {
    std::string digits = std::to_string(i);
    return prefix + std::string(width - std::min<int>(width, digits.size()), '0') + digits;
  };

  constexpr std::int64_t kEpoch = 1700000000;
  SynthCorpus out;
  std::vector<int> topic_of(cfg.n_articles);
  std::vector<std::string> article_ids;
  for (int a = 0; a < cfg.n_articles; ++a) {
    topic_of[a] = a % cfg.n_topics;
    Document doc;
    doc.id = pad_id("art", a, 4);
    doc.kind = DocKind::kArticle;
    std::string lead = sentence(topic_of[a], cfg.lead_words);
    lead[0] = static_cast<char>(lead[0] - 'a' + 'A');
    doc.text = lead + ".";
    if (cfg.body_words > 0) {
      doc.text += "\n\n" + sentence(topic_of[a], cfg.body_words) + ".";
    }
    doc.created_at = kEpoch + static_cast<std::int64_t>(a) * 3600;
    article_ids.push_back(doc.id);
    out.documents.push_back(std::move(doc));
  }

  int tweet_no = 0;
  for (int a = 0; a < cfg.n_articles; ++a) {
    std::vector<std::string> thread;
    for (int j = 0; j < cfg.tweets_per_article; ++j) {
      Document doc;
      doc.id = pad_id("tw", tweet_no++, 5);
      doc.kind = DocKind::kTweet;
      doc.text = sentence(topic_of[a], cfg.tweet_words);
      if (UniformIndex(rng, 3) == 0) doc.text += " #" + topic_word(topic_of[a]);
      if (UniformIndex(rng, 4) == 0) doc.text += " https://t.co/x" + std::to_string(j);
      doc.created_at = kEpoch + static_cast<std::int64_t>(a) * 3600 + 60 * (j + 1);
      if (j > 0) {
        doc.parent_id = thread[UniformIndex(rng, thread.size())];
        doc.parent_kind =
            UniformIndex(rng, 2) == 0 ? ParentKind::kReply : ParentKind::kQuote;
      }
      thread.push_back(doc.id);

      out.pairs.push_back({doc.id, article_ids[a], PairLabel::kMatch});
      for (int b = 0; b < cfg.n_articles; ++b) {
        if (b == a) continue;
        out.pairs.push_back({doc.id, article_ids[b],
                             topic_of[b] == topic_of[a] ? PairLabel::kMatch
                                                        : PairLabel::kNoMatch});
      }
      out.documents.push_back(std::move(doc));
    }
  }
  return out;
}

std::vector<std::string> IdsOfKind(const std::vector<Document>& docs,
                                   DocKind kind) {
  std::vector<std::string> ids;
  for (const auto& doc : docs) {
    if (doc.kind == kind) ids.push_back(doc.id);
  }
  return ids;
}

}  // namespace tweetlink
