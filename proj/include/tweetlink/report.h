#ifndef TWEETLINK_REPORT_H_
#define TWEETLINK_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace tweetlink {

using ReportValue = std::variant<std::int64_t, double, std::string, bool>;

// Fields are emitted in insertion order.
struct ReportRow {
  std::vector<std::pair<std::string, ReportValue>> fields;

  ReportRow& Add(std::string key, ReportValue value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

struct ReportTable {
  std::vector<ReportRow> rows;
};

enum class ReportFormat { kJson, kCsv };

ReportFormat ParseReportFormat(std::string_view s);

// Doubles are printed with six fixed decimals. JSON renders a single row as
// an object and several rows as an array; CSV takes its header from the
// first row. Throws kEmptyInput when there are no rows.
std::string RenderReport(const ReportTable& table, ReportFormat format);
void EmitReport(const std::filesystem::path& path, const ReportTable& table,
                ReportFormat format);

}  // namespace tweetlink

#endif  // TWEETLINK_REPORT_H_
