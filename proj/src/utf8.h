#ifndef TWEETLINK_SRC_UTF8_H_
#define TWEETLINK_SRC_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace tweetlink::utf8 {

// Invalid bytes decode to U+FFFD one byte at a time.
std::vector<char32_t> Decode(std::string_view text);
void Append(std::string& out, char32_t cp);
std::string Encode(const std::vector<char32_t>& cps);

// Lowercases ASCII, Latin-1 and Latin Extended-A (covers Polish diacritics).
char32_t ToLower(char32_t cp);
std::string ToLower(std::string_view text);

bool IsEmoji(char32_t cp);
bool IsWhitespace(char32_t cp);
// ASCII letters and non-ASCII code points outside symbol/punctuation blocks.
bool IsLetter(char32_t cp);

}  // namespace tweetlink::utf8

#endif  // TWEETLINK_SRC_UTF8_H_
