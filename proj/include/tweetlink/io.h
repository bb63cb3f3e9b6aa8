#ifndef TWEETLINK_IO_H_
#define TWEETLINK_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tweetlink {

// Whole-file helpers; failures raise Error(kIoError).
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Splits on '\n', stripping a trailing '\r'. A final empty line is dropped.
std::vector<std::string_view> SplitLines(std::string_view text);

// Shortest decimal that round-trips.
std::string FormatDouble(double value);
// Fixed six decimals, used by every report.
std::string FormatFixed6(double value);

std::string CsvEscape(std::string_view field);
std::vector<std::string> ParseCsvLine(std::string_view line);

}  // namespace tweetlink

#endif  // TWEETLINK_IO_H_
