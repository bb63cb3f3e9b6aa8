#ifndef TWEETLINK_CORPUS_H_
#define TWEETLINK_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tweetlink/matrix.h"

namespace tweetlink {

enum class DocKind { kTweet, kArticle };
enum class ParentKind { kNone, kReply, kQuote };
enum class PairLabel { kMatch, kNoMatch, kUnknown };
enum class Verdict { kMatch, kNoMatch, kSkip };

std::string_view ToString(DocKind kind);
std::string_view ToString(ParentKind kind);
std::string_view ToString(PairLabel label);
std::string_view ToString(Verdict verdict);

// One tweet or news article.
struct Document {
  std::string id;
  DocKind kind = DocKind::kTweet;
  std::string text;
  std::optional<std::string> summary;
  std::int64_t created_at = 0;
  std::optional<std::string> parent_id;
  ParentKind parent_kind = ParentKind::kNone;

  bool operator==(const Document&) const = default;
};

struct LinkedPair {
  std::string tweet_id;
  std::string article_id;
  PairLabel label = PairLabel::kUnknown;

  bool operator==(const LinkedPair&) const = default;
};

struct AnnotationRecord {
  std::string tweet_id;
  std::string article_id;
  std::string annotator_id;
  Verdict verdict = Verdict::kSkip;
};

// Lowercase search keywords; hashtags keep their leading '#'.
class KeywordList {
 public:
  // Lowercases entries and drops blanks; throws kEmptyInput if nothing is left.
  explicit KeywordList(std::vector<std::string> entries);

  const std::vector<std::string>& entries() const { return entries_; }
  bool Contains(std::string_view token) const;

 private:
  std::vector<std::string> entries_;  // sorted, unique
};

// Reads documents.jsonl. When `kind` is given, lines without a "kind" field
// take it and lines with a different kind are rejected.
std::vector<Document> LoadDocuments(const std::filesystem::path& path,
                                    std::optional<DocKind> kind = std::nullopt);
std::vector<Document> ParseDocuments(std::string_view jsonl,
                                     std::optional<DocKind> kind = std::nullopt);
std::vector<LinkedPair> LoadPairs(const std::filesystem::path& path);
std::vector<AnnotationRecord> LoadAnnotations(
    const std::filesystem::path& path);
KeywordList LoadKeywords(const std::filesystem::path& path);

std::string SerializeDocuments(const std::vector<Document>& docs);
std::string SerializePairs(const std::vector<LinkedPair>& pairs);

// The stored summary when present, otherwise the first paragraph of the text
// (up to the first blank line), cut to at most max_chars code points.
std::string ExtractSummary(const Document& article, std::size_t max_chars);

// Lowercased word tokens of `text`; '#word' hashtags are kept as one token.
std::vector<std::string> KeywordTokens(std::string_view text);

std::vector<Document> KeywordFilter(const std::vector<Document>& docs,
                                    const KeywordList& keywords);

// Duplicate pairs must agree on their label.
GroundTruthMatrix BuildGroundTruth(const std::vector<LinkedPair>& pairs,
                                   const std::vector<std::string>& tweet_ids,
                                   const std::vector<std::string>& article_ids);

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_topics = 2;
  int n_articles = 50;
  int tweets_per_article = 4;
  int vocab_per_topic = 40;
  int lead_words = 12;
  int body_words = 48;
  int tweet_words = 8;
};

struct SynthCorpus {
  std::vector<Document> documents;  // articles first, then tweets
  std::vector<LinkedPair> pairs;
};

// Topic-structured corpus: article i belongs to topic i % n_topics, its
// tweets form one reply/quote cascade and every topic has its own disjoint
// vocabulary. Same-topic pairs are labelled match, cross-topic no_match; each
// tweet's own article is its first pair.
SynthCorpus Synthesize(const SynthConfig& config);

// Vocabulary word `index` of the synthetic generator (letters only).
std::string SynthWord(int index);

std::vector<std::string> IdsOfKind(const std::vector<Document>& docs,
                                   DocKind kind);

}  // namespace tweetlink

#endif  // TWEETLINK_CORPUS_H_
