// Copyright 2026 The ambr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <fstream>
#include <sstream>

#include "ambr/harness.h"

namespace ambr {

using nlohmann::json;

namespace {

constexpr const char* kColumns[] = {"algorithm",   "fraction",  "seed",
                                    "error_rate",  "mean_regret",
                                    "mean_evals",  "min_evals", "max_evals"};
constexpr std::size_t kColumnCount = 8;

// Shortest text that parses back to the same double.
std::string FormatNumber(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string QuoteField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void AppendCsvRow(std::string& out, const ReportRow& row) {
  const std::string fields[kColumnCount] = {
      row.algorithm,                 FormatNumber(row.fraction),
      row.seed,                      FormatNumber(row.error_rate),
      FormatNumber(row.mean_regret), FormatNumber(row.mean_evals),
      FormatNumber(row.min_evals),   FormatNumber(row.max_evals)};
  for (std::size_t k = 0; k < kColumnCount; ++k) {
    if (k) out.push_back(',');
    out += QuoteField(fields[k]);
  }
  out += "\r\n";
}

// RFC 4180 records. Fields may be quoted; quoted fields may span lines.
std::vector<std::vector<std::string>> SplitCsv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kParseError, "unterminated quoted field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

double ParseNumber(const std::string& text, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line) +
                                            ": '" + text + "' is not a number");
  }
  return v;
}

json RowToJson(const ReportRow& row) {
  json j = {{"algorithm", row.algorithm},     {"fraction", row.fraction},
            {"seed", row.seed},               {"error_rate", row.error_rate},
            {"mean_regret", row.mean_regret}, {"mean_evals", row.mean_evals},
            {"min_evals", row.min_evals},     {"max_evals", row.max_evals}};
  if (row.error_rate_min) j["error_rate_min"] = *row.error_rate_min;
  if (row.error_rate_max) j["error_rate_max"] = *row.error_rate_max;
  if (row.regret_min) j["regret_min"] = *row.regret_min;
  if (row.regret_max) j["regret_max"] = *row.regret_max;
  return j;
}

ReportRow RowFromJson(const json& j) {
  ReportRow row;
  try {
    row.algorithm = j.at("algorithm").get<std::string>();
    row.fraction = j.at("fraction").get<double>();
    row.seed = j.at("seed").get<std::string>();
    row.error_rate = j.at("error_rate").get<double>();
    row.mean_regret = j.at("mean_regret").get<double>();
    row.mean_evals = j.at("mean_evals").get<double>();
    row.min_evals = j.at("min_evals").get<double>();
    row.max_evals = j.at("max_evals").get<double>();
    auto opt = [&j](const char* key) -> std::optional<double> {
      auto it = j.find(key);
      if (it == j.end()) return std::nullopt;
      return it->get<double>();
    };
    row.error_rate_min = opt("error_rate_min");
    row.error_rate_max = opt("error_rate_max");
    row.regret_min = opt("regret_min");
    row.regret_max = opt("regret_max");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("report row: ") + e.what());
  }
  return row;
}

}  // namespace

bool ReportRow::SameColumns(const ReportRow& o) const {
  return algorithm == o.algorithm && fraction == o.fraction && seed == o.seed &&
         error_rate == o.error_rate && mean_regret == o.mean_regret &&
         mean_evals == o.mean_evals && min_evals == o.min_evals &&
         max_evals == o.max_evals;
}

std::string ReportToCsv(const Report& report) {
  std::string out;
  for (std::size_t k = 0; k < kColumnCount; ++k) {
    if (k) out.push_back(',');
    out += kColumns[k];
  }
  out += "\r\n";
  for (const auto& row : report.rows) AppendCsvRow(out, row);
  for (const auto& row : report.aggregates) AppendCsvRow(out, row);
  return out;
}

std::vector<ReportRow> ParseReportCsv(std::string_view text) {
  const auto records = SplitCsv(text);
  if (records.empty()) throw Error(ErrorCode::kParseError, "missing CSV header");
  const auto& header = records.front();
  if (header.size() != kColumnCount) {
    throw Error(ErrorCode::kParseError, "CSV header must have 8 columns");
  }
  for (std::size_t k = 0; k < kColumnCount; ++k) {
    if (header[k] != kColumns[k]) {
      throw Error(ErrorCode::kParseError,
                  "unexpected CSV column '" + header[k] + "'");
    }
  }
  std::vector<ReportRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    const std::size_t line = r + 1;
    if (f.size() != kColumnCount) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line) + ": expected 8 fields");
    }
    ReportRow row;
    row.algorithm = f[0];
    row.fraction = ParseNumber(f[1], line);
    row.seed = f[2];
    row.error_rate = ParseNumber(f[3], line);
    row.mean_regret = ParseNumber(f[4], line);
    row.mean_evals = ParseNumber(f[5], line);
    row.min_evals = ParseNumber(f[6], line);
    row.max_evals = ParseNumber(f[7], line);
    rows.push_back(std::move(row));
  }
  return rows;
}

json ReportToJson(const Report& report) {
  json rows = json::array();
  for (const auto& row : report.rows) rows.push_back(RowToJson(row));
  json aggregates = json::array();
  for (const auto& row : report.aggregates) aggregates.push_back(RowToJson(row));
  return {{"rows", std::move(rows)}, {"aggregates", std::move(aggregates)}};
}

Report ReportFromJson(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("aggregates")) {
    throw Error(ErrorCode::kSchemaError,
                "report must be an object with 'rows' and 'aggregates'");
  }
  Report report;
  for (const auto& row : j.at("rows")) report.rows.push_back(RowFromJson(row));
  for (const auto& row : j.at("aggregates")) {
    report.aggregates.push_back(RowFromJson(row));
  }
  return report;
}

void WriteReport(const Report& report, ReportFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  if (format == ReportFormat::kCsv) {
    out << ReportToCsv(report);
  } else {
    out << ReportToJson(report).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing '" + path + "'");
}

}  // namespace ambr
