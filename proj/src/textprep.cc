#include "tweetlink/textprep.h"

#include <algorithm>

#include "tweetlink/error.h"
#include "tweetlink/io.h"
#include "utf8.h"

namespace tweetlink {
namespace {

using CodePoints = std::vector<char32_t>;

bool StartsWith(const CodePoints& s, std::size_t pos, std::u32string_view p) {
  if (pos + p.size() > s.size()) return false;
  return std::equal(p.begin(), p.end(), s.begin() + pos);
}

// Drops every run from `pos` to the next whitespace for which `starts`
// holds, replacing it with a single space.
template <typename Pred>
CodePoints RemoveRuns(const CodePoints& in, Pred starts) {
  CodePoints out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (starts(i)) {
      while (i < in.size() && !utf8::IsWhitespace(in[i])) ++i;
      out.push_back(' ');
    } else {
      out.push_back(in[i++]);
    }
  }
  return out;
}

std::u32string_view EmojiAlias(char32_t cp) {
  switch (cp) {
    case 0x1F600: return U":grinning_face:";
    case 0x1F602: return U":face_with_tears_of_joy:";
    case 0x1F60A: return U":smiling_face:";
    case 0x1F622: return U":crying_face:";
    case 0x1F62D: return U":loudly_crying_face:";
    case 0x1F621: return U":pouting_face:";
    case 0x1F44D: return U":thumbs_up:";
    case 0x1F44E: return U":thumbs_down:";
    case 0x1F64F: return U":folded_hands:";
    case 0x1F525: return U":fire:";
    case 0x2764: return U":red_heart:";
    case 0x1F494: return U":broken_heart:";
    case 0x1F4A5: return U":collision:";
    case 0x26A0: return U":warning:";
    default: return U":emoji:";
  }
}

// ':' + [a-z_]+ + ':' produced by alias mode.
bool IsAliasWord(const CodePoints& w) {
  if (w.size() < 3 || w.front() != ':' || w.back() != ':') return false;
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (!((w[i] >= 'a' && w[i] <= 'z') || w[i] == '_')) return false;
  }
  return true;
}

std::vector<CodePoints> SplitWords(const CodePoints& cps) {
  std::vector<CodePoints> words;
  CodePoints current;
  for (char32_t cp : cps) {
    if (utf8::IsWhitespace(cp)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

}  // namespace

void LemmaMap::Add(std::string token, std::string lemma) {
  if (token.empty() || lemma.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty lemma map entry");
  }
  map_.insert_or_assign(std::move(token), std::move(lemma));
}

std::string LemmaMap::Lookup(const std::string& token) const {
  auto it = map_.find(token);
  return it == map_.end() ? token : it->second;
}

LemmaMap ParseLemmas(std::string_view tsv) {
  LemmaMap map;
  std::size_t line_no = 0;
  for (auto line : SplitLines(tsv)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) {
      throw Error(ErrorCode::kMalformedLine, "line " + std::to_string(line_no));
    }
    map.Add(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return map;
}

LemmaMap LoadLemmas(const std::filesystem::path& path) {
  return ParseLemmas(ReadFile(path));
}

std::string Clean(std::string_view text, const CleaningConfig& cfg) {
  if (cfg.min_word_len < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_word_len must be >= 1");
  }
  CodePoints cps = utf8::Decode(text);
  for (auto& cp : cps) cp = utf8::ToLower(cp);

  cps = RemoveRuns(cps, [&](std::size_t i) {
    return StartsWith(cps, i, U"http://") || StartsWith(cps, i, U"https://") ||
           StartsWith(cps, i, U"www.");
  });
  cps = RemoveRuns(cps, [&](std::size_t i) { return cps[i] == '@'; });

  if (cfg.strip_hashes) std::erase(cps, U'#');

  CodePoints handled;
  handled.reserve(cps.size());
  for (char32_t cp : cps) {
    if (!utf8::IsEmoji(cp)) {
      handled.push_back(cp);
      continue;
    }
    handled.push_back(' ');
    // Joiners and variation selectors are part of the preceding emoji.
    if (cfg.emoji_mode == EmojiMode::kAlias && cp != 0x200D && cp != 0xFE0F &&
        !(cp >= 0x1F3FB && cp <= 0x1F3FF)) {
      auto alias = EmojiAlias(cp);
      handled.insert(handled.end(), alias.begin(), alias.end());
      handled.push_back(' ');
    }
  }

  std::string out;
  for (auto& word : SplitWords(handled)) {
    CodePoints kept;
    if (IsAliasWord(word)) {
      if (word.size() >= static_cast<std::size_t>(cfg.min_word_len)) kept = word;
    } else {
      // Digits and punctuation split words; a leading '#' survives when
      // hashtags are kept.
      CodePoints piece;
      auto flush = [&] {
        std::size_t letters = piece.size();
        if (!piece.empty() && piece.front() == '#') --letters;
        if (letters > 0 && letters >= static_cast<std::size_t>(cfg.min_word_len)) {
          if (!kept.empty()) kept.push_back(' ');
          kept.insert(kept.end(), piece.begin(), piece.end());
        }
        piece.clear();
      };
      for (std::size_t i = 0; i < word.size(); ++i) {
        const char32_t cp = word[i];
        if (utf8::IsLetter(cp)) {
          piece.push_back(cp);
        } else if (cp == '#' && !cfg.strip_hashes && piece.empty() &&
                   i + 1 < word.size() && utf8::IsLetter(word[i + 1])) {
          piece.push_back(cp);
        } else {
          flush();
        }
      }
      flush();
    }
    if (kept.empty()) continue;
    if (!out.empty()) out += ' ';
    out += utf8::Encode(kept);
  }
  return out;
}

TokenSeq TokenizeLemmatize(std::string_view cleaned, const LemmaMap& lemmas) {
  TokenSeq tokens;
  for (auto& word : SplitWords(utf8::Decode(cleaned))) {
    tokens.push_back(lemmas.Lookup(utf8::Encode(word)));
  }
  return tokens;
}

TokenSeq Truncate(const TokenSeq& tokens, std::size_t limit) {
  if (limit < 1) throw Error(ErrorCode::kInvalidArgument, "limit must be >= 1");
  return TokenSeq(tokens.begin(),
                  tokens.begin() + static_cast<std::ptrdiff_t>(
                                       std::min(limit, tokens.size())));
}

std::vector<TokenSeq> Chunk(const TokenSeq& tokens, const ChunkingConfig& cfg) {
  if (cfg.content_len < 1) {
    throw Error(ErrorCode::kInvalidArgument, "content_len must be >= 1");
  }
  if (cfg.bos == cfg.eos || cfg.bos == cfg.pad || cfg.eos == cfg.pad) {
    throw Error(ErrorCode::kInvalidArgument, "sentinel tokens must differ");
  }
  if (tokens.empty()) throw Error(ErrorCode::kEmptyInput, "chunk");
  std::vector<TokenSeq> chunks;
  for (std::size_t start = 0; start < tokens.size(); start += cfg.content_len) {
    TokenSeq chunk;
    chunk.reserve(cfg.content_len + 2);
    chunk.push_back(cfg.bos);
    const std::size_t end = std::min(tokens.size(), start + cfg.content_len);
    chunk.insert(chunk.end(), tokens.begin() + start, tokens.begin() + end);
    chunk.resize(cfg.content_len + 1, cfg.pad);
    chunk.push_back(cfg.eos);
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

AugmentSplit SplitForAugmentation(const TokenSeq& tokens,
                                  const ChunkingConfig& cfg) {
  if (cfg.header_len < 1 || cfg.part_len < 1) {
    throw Error(ErrorCode::kInvalidArgument, "header_len and part_len must be >= 1");
  }
  if (tokens.empty()) throw Error(ErrorCode::kEmptyInput, "augment split");
  AugmentSplit split;
  const std::size_t header_end = std::min(cfg.header_len, tokens.size());
  split.header.assign(tokens.begin(), tokens.begin() + header_end);
  for (std::size_t start = header_end; start < tokens.size(); start += cfg.part_len) {
    const std::size_t end = std::min(tokens.size(), start + cfg.part_len);
    split.parts.emplace_back(tokens.begin() + start, tokens.begin() + end);
  }
  return split;
}

}  // namespace tweetlink
