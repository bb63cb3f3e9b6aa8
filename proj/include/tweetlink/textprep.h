#ifndef TWEETLINK_TEXTPREP_H_
#define TWEETLINK_TEXTPREP_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tweetlink {

enum class EmojiMode { kDrop, kAlias };

struct CleaningConfig {
  int min_word_len = 3;
  EmojiMode emoji_mode = EmojiMode::kDrop;
  bool strip_hashes = true;
};

// Whitespace-free, nonempty tokens.
using TokenSeq = std::vector<std::string>;

class LemmaMap {
 public:
  LemmaMap() = default;
  // Throws kInvalidArgument on an empty key or value.
  void Add(std::string token, std::string lemma);
  std::string Lookup(const std::string& token) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, std::string> map_;
};

// lemmas.tsv: "token<TAB>lemma" per line; blank lines ignored.
LemmaMap LoadLemmas(const std::filesystem::path& path);
LemmaMap ParseLemmas(std::string_view tsv);

// Lowercase, strip URLs and @-mentions, handle '#' and emoji, drop digits and
// punctuation and words shorter than min_word_len, collapse whitespace.
// Idempotent.
std::string Clean(std::string_view text, const CleaningConfig& cfg = {});

TokenSeq TokenizeLemmatize(std::string_view cleaned, const LemmaMap& lemmas);

TokenSeq Truncate(const TokenSeq& tokens, std::size_t limit);

struct ChunkingConfig {
  std::size_t content_len = 510;
  std::string bos = "[CLS]";
  std::string eos = "[SEP]";
  std::string pad = "[PAD]";
  std::size_t truncate_limit = 512;
  std::size_t header_len = 256;
  std::size_t part_len = 256;
};

// Uniform sentinel-wrapped chunks of length content_len + 2; the last chunk
// is padded.
std::vector<TokenSeq> Chunk(const TokenSeq& tokens, const ChunkingConfig& cfg);

struct AugmentSplit {
  TokenSeq header;
  std::vector<TokenSeq> parts;
};

// Header of header_len tokens followed by consecutive part_len parts.
AugmentSplit SplitForAugmentation(const TokenSeq& tokens,
                                  const ChunkingConfig& cfg);

}  // namespace tweetlink

#endif  // TWEETLINK_TEXTPREP_H_
