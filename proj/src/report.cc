#include "tweetlink/report.h"

#include <json.hpp>

#include "tweetlink/error.h"
#include "tweetlink/io.h"

namespace tweetlink {
namespace {

std::string RenderJsonValue(const ReportValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return FormatFixed6(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return nlohmann::json(v).dump();
        }
      },
      value);
}

std::string RenderCsvValue(const ReportValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return FormatFixed6(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return CsvEscape(v);
        }
      },
      value);
}

std::string RenderJsonRow(const ReportRow& row) {
  std::string out = "{";
  for (std::size_t i = 0; i < row.fields.size(); ++i) {
    if (i > 0) out += ", ";
    out += nlohmann::json(row.fields[i].first).dump() + ": " +
           RenderJsonValue(row.fields[i].second);
  }
  return out + "}";
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kConfigInvalid, "report format '" + std::string(s) + "'");
}

std::string RenderReport(const ReportTable& table, ReportFormat format) {
  if (table.rows.empty()) throw Error(ErrorCode::kEmptyInput, "empty report");
  std::string out;
  if (format == ReportFormat::kJson) {
    if (table.rows.size() == 1) return RenderJsonRow(table.rows.front()) + "\n";
    out = "[\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      out += "  " + RenderJsonRow(table.rows[i]);
      out += i + 1 < table.rows.size() ? ",\n" : "\n";
    }
    return out + "]\n";
  }
  const auto& header = table.rows.front().fields;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += (i > 0 ? "," : "") + CsvEscape(header[i].first);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.fields.size() != header.size()) {
      throw Error(ErrorCode::kRaggedRows, "report rows differ in width");
    }
    for (std::size_t i = 0; i < row.fields.size(); ++i) {
      out += (i > 0 ? "," : "") + RenderCsvValue(row.fields[i].second);
    }
    out += '\n';
  }
  return out;
}

void EmitReport(const std::filesystem::path& path, const ReportTable& table,
                ReportFormat format) {
  WriteFile(path, RenderReport(table, format));
}

}  // namespace tweetlink
