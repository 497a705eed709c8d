/*
 * Copyright 2026 The PhishBench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "phishbench/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "phishbench/error.hpp"
#include "phishbench/text.hpp"

namespace phishbench {

using nlohmann::ordered_json;

const char* LabelName(Label label) { return label == Label::kPhishing ? "phishing" : "benign"; }

std::optional<Label> ParseLabel(std::string_view name) {
  if (name == "phishing") return Label::kPhishing;
  if (name == "benign") return Label::kBenign;
  return std::nullopt;
}

const char* LanguageName(Language language) {
  switch (language) {
    case Language::kEn: return "en";
    case Language::kIt: return "it";
    case Language::kDe: return "de";
    case Language::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Language> ParseLanguage(std::string_view name) {
  if (name == "en") return Language::kEn;
  if (name == "it") return Language::kIt;
  if (name == "de") return Language::kDe;
  if (name == "unknown") return Language::kUnknown;
  return std::nullopt;
}

const char* InputFormatName(InputFormat format) {
  switch (format) {
    case InputFormat::kCsvVariantA: return "csv-variant-a";
    case InputFormat::kCsvVariantB: return "csv-variant-b";
    case InputFormat::kJsonl: return "jsonl";
  }
  return "csv-variant-a";
}

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

InputFormat ParseInputFormat(const std::string& name) {
  if (name == "csv-variant-a") return InputFormat::kCsvVariantA;
  if (name == "csv-variant-b") return InputFormat::kCsvVariantB;
  if (name == "jsonl") return InputFormat::kJsonl;
  Fail(ErrorKind::kValidation, "unknown input_format '" + name + "'");
}

DatasetDescriptor DescriptorFromJson(const ordered_json& j) {
  DatasetDescriptor d;
  d.name = j.at("name").get<std::string>();
  d.expected_total = j.at("expected_total").get<std::size_t>();
  d.expected_phishing = j.at("expected_phishing").get<std::size_t>();
  d.expected_benign = j.at("expected_benign").get<std::size_t>();
  Require(d.expected_total == d.expected_phishing + d.expected_benign, ErrorKind::kValidation,
          "descriptor " + d.name + ": expected_total != expected_phishing + expected_benign");
  d.input_format = ParseInputFormat(j.at("input_format").get<std::string>());
  const auto& columns = j.at("column_map");
  d.subject_column = columns.value("subject", "");
  d.body_column = columns.at("body").get<std::string>();
  d.label_column = columns.at("label").get<std::string>();
  for (const auto& [raw, cls] : j.at("label_map").items()) {
    const auto label = ParseLabel(cls.get<std::string>());
    Require(label.has_value(), ErrorKind::kValidation,
            "descriptor " + d.name + ": label_map target must be phishing or benign");
    d.label_map[Lower(Trim(raw))] = *label;
  }
  const auto language = ParseLanguage(j.value("language", "en"));
  Require(language.has_value(), ErrorKind::kValidation, "descriptor " + d.name + ": bad language");
  d.language = *language;
  return d;
}

// RFC 4180 reader. Handles quoted fields with embedded separators, doubled
// quotes and line breaks; accepts LF or CRLF record ends and a leading BOM.
class CsvReader {
 public:
  explicit CsvReader(std::string content) : text_(std::move(content)) {
    if (text_.rfind("\xEF\xBB\xBF", 0) == 0) pos_ = 3;
  }

  bool Next(std::vector<std::string>& fields) {
    fields.clear();
    if (pos_ >= text_.size()) return false;
    std::string field;
    bool in_quotes = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (in_quotes) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            in_quotes = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"') {
        in_quotes = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        break;
      } else {
        field.push_back(c);
      }
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::string text_;
  size_t pos_ = 0;
};

struct RawRow {
  std::string subject;
  std::string body;
  std::string label;
};

}  // namespace

DatasetRegistry DatasetRegistry::FromJson(std::string_view json_text) {
  DatasetRegistry registry;
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    Fail(ErrorKind::kValidation, std::string("dataset registry is not valid JSON: ") + e.what());
  }
  try {
    std::set<std::string> seen;
    for (const auto& entry : doc.at("datasets")) {
      auto descriptor = DescriptorFromJson(entry);
      Require(seen.insert(descriptor.name).second, ErrorKind::kValidation,
              "duplicate dataset '" + descriptor.name + "' in registry");
      registry.descriptors_.push_back(std::move(descriptor));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    Fail(ErrorKind::kValidation, std::string("malformed dataset registry: ") + e.what());
  }
  return registry;
}

DatasetRegistry DatasetRegistry::Load(const std::filesystem::path& path) {
  return FromJson(ReadFile(path));
}

const DatasetDescriptor& DatasetRegistry::Get(std::string_view name) const {
  for (const auto& d : descriptors_) {
    if (d.name == name) return d;
  }
  Fail(ErrorKind::kValidation, "unknown dataset '" + std::string(name) + "'");
}

bool DatasetRegistry::Contains(std::string_view name) const {
  return std::any_of(descriptors_.begin(), descriptors_.end(),
                     [&](const auto& d) { return d.name == name; });
}

std::vector<std::string> DatasetRegistry::Names() const {
  std::vector<std::string> names;
  for (const auto& d : descriptors_) names.push_back(d.name);
  return names;
}

DatasetRegistry BuiltinRegistry() {
  static const char* kRegistry = R"({
  "version": 1,
  "datasets": [
    {"name": "ceas", "expected_total": 39126, "expected_phishing": 21829, "expected_benign": 17297,
     "input_format": "csv-variant-a", "column_map": {"subject": "subject", "body": "body", "label": "label"},
     "label_map": {"1": "phishing", "0": "benign"}, "language": "en"},
    {"name": "enron-v1", "expected_total": 29569, "expected_phishing": 13778, "expected_benign": 15791,
     "input_format": "csv-variant-a", "column_map": {"subject": "subject", "body": "body", "label": "label"},
     "label_map": {"1": "phishing", "0": "benign"}, "language": "en"},
    {"name": "ling-v1", "expected_total": 2797, "expected_phishing": 445, "expected_benign": 2352,
     "input_format": "csv-variant-a", "column_map": {"subject": "subject", "body": "body", "label": "label"},
     "label_map": {"1": "phishing", "0": "benign"}, "language": "en"},
    {"name": "spamassassin", "expected_total": 5791, "expected_phishing": 1704, "expected_benign": 4087,
     "input_format": "csv-variant-a", "column_map": {"subject": "subject", "body": "body", "label": "label"},
     "label_map": {"1": "phishing", "0": "benign"}, "language": "en"},
    {"name": "trec", "expected_total": 123232, "expected_phishing": 55291, "expected_benign": 67941,
     "input_format": "csv-variant-a", "column_map": {"subject": "subject", "body": "body", "label": "label"},
     "label_map": {"1": "phishing", "0": "benign"}, "language": "en"},
    {"name": "chataut", "expected_total": 24583, "expected_phishing": 19681, "expected_benign": 4902,
     "input_format": "csv-variant-b", "column_map": {"body": "Email Text", "label": "Email Type"},
     "label_map": {"phishing email": "phishing", "safe email": "benign"}, "language": "en"},
    {"name": "enron-v2", "expected_total": 9601, "expected_phishing": 4687, "expected_benign": 4914,
     "input_format": "csv-variant-a", "column_map": {"subject": "Subject", "body": "Message", "label": "Spam/Ham"},
     "label_map": {"spam": "phishing", "ham": "benign"}, "language": "en"},
    {"name": "ling-v2", "expected_total": 2590, "expected_phishing": 423, "expected_benign": 2167,
     "input_format": "csv-variant-a", "column_map": {"subject": "subject", "body": "message", "label": "label"},
     "label_map": {"1": "phishing", "0": "benign"}, "language": "en"}
  ]
})";
  return DatasetRegistry::FromJson(kRegistry);
}

namespace {

std::vector<RawRow> ReadCsvRows(const std::string& content, const DatasetDescriptor& d,
                                std::vector<RejectedRow>& rejects) {
  CsvReader reader(content);
  std::vector<std::string> header;
  std::vector<RawRow> rows;
  if (!reader.Next(header)) return rows;
  if (d.input_format == InputFormat::kCsvVariantB && !header.empty() && Trim(header[0]).empty()) {
    header[0] = "__index__";
  }
  const auto column = [&](const std::string& name) -> std::optional<size_t> {
    if (name.empty()) return std::nullopt;
    for (size_t i = 0; i < header.size(); ++i) {
      if (Trim(header[i]) == name) return i;
    }
    Fail(ErrorKind::kValidation, "dataset " + d.name + ": column '" + name + "' not in header");
  };
  const auto subject_col = column(d.subject_column);
  const size_t body_col = *column(d.body_column);
  const size_t label_col = *column(d.label_column);

  std::vector<std::string> fields;
  size_t row_number = 0;
  while (reader.Next(fields)) {
    ++row_number;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != header.size()) {
      rejects.push_back({row_number, "field count " + std::to_string(fields.size()) +
                                         " does not match header (" +
                                         std::to_string(header.size()) + ")"});
      rows.push_back({});
      rows.back().label = "\x01";  // marker for rejected row, keeps ids stable
      continue;
    }
    RawRow row;
    if (subject_col) row.subject = fields[*subject_col];
    row.body = fields[body_col];
    row.label = fields[label_col];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> ReadJsonlRows(const std::string& content, const DatasetDescriptor& d,
                                  std::vector<RejectedRow>& rejects) {
  std::vector<RawRow> rows;
  std::istringstream in(content);
  std::string line;
  size_t row_number = 0;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    ++row_number;
    RawRow row;
    try {
      const auto j = ordered_json::parse(line);
      const auto text = [&](const std::string& key) -> std::string {
        if (key.empty() || !j.contains(key) || j[key].is_null()) return "";
        return j[key].is_string() ? j[key].get<std::string>() : j[key].dump();
      };
      row.subject = text(d.subject_column);
      row.body = text(d.body_column);
      row.label = text(d.label_column);
    } catch (const std::exception& e) {
      rejects.push_back({row_number, std::string("malformed JSON: ") + e.what()});
      row.label = "\x01";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

IngestResult IngestDataset(const std::filesystem::path& path, const DatasetDescriptor& descriptor) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) Fail(ErrorKind::kIo, "cannot read dataset file " + path.string());
  probe.close();
  const std::string content = ReadFile(path);

  IngestResult result;
  const auto rows = descriptor.input_format == InputFormat::kJsonl
                        ? ReadJsonlRows(content, descriptor, result.rejects)
                        : ReadCsvRows(content, descriptor, result.rejects);
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.label == "\x01") continue;
    const auto it = descriptor.label_map.find(Lower(Trim(row.label)));
    if (it == descriptor.label_map.end()) {
      result.rejects.push_back({i + 1, "unmappable label '" + row.label + "'"});
      continue;
    }
    EmailRecord record;
    record.id = descriptor.name + "-" + std::to_string(i + 1);
    record.subject = CleanText(row.subject);
    record.body = CleanText(row.body);
    record.label = it->second;
    record.language = descriptor.language;
    record.source = descriptor.name;
    result.records.push_back(std::move(record));
  }
  std::sort(result.rejects.begin(), result.rejects.end(),
            [](const auto& a, const auto& b) { return a.row < b.row; });
  if (result.records.size() != descriptor.expected_total) {
    result.warnings.push_back("count mismatch for " + descriptor.name + ": expected " +
                              std::to_string(descriptor.expected_total) + " records, got " +
                              std::to_string(result.records.size()));
  }
  return result;
}

std::optional<InvariantViolation> CheckRecords(const Corpus& records) {
  std::unordered_set<std::string> ids;
  for (const auto& r : records) {
    if (r.id.empty()) return InvariantViolation{r.id, "empty id"};
    if (!ids.insert(r.id).second) return InvariantViolation{r.id, "duplicate id"};
    if (!utf8::IsValid(r.subject) || !utf8::IsValid(r.body) || !utf8::IsValid(r.id) ||
        !utf8::IsValid(r.source)) {
      return InvariantViolation{r.id, "invalid UTF-8"};
    }
    if (CleanText(r.body) != r.body) return InvariantViolation{r.id, "body is not clean text"};
    if (CleanText(r.subject) != r.subject) {
      return InvariantViolation{r.id, "subject is not clean text"};
    }
  }
  return std::nullopt;
}

std::string RecordToJsonLine(const EmailRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["subject"] = r.subject;
  j["body"] = r.body;
  j["label"] = LabelName(r.label);
  j["language"] = LanguageName(r.language);
  j["source"] = r.source;
  j["generated"] = r.generated;
  return j.dump();
}

EmailRecord RecordFromJsonLine(std::string_view line) {
  const auto j = ordered_json::parse(line);
  EmailRecord r;
  r.id = j.at("id").get<std::string>();
  r.subject = j.at("subject").get<std::string>();
  r.body = j.at("body").get<std::string>();
  const auto label = ParseLabel(j.at("label").get<std::string>());
  if (!label) throw std::invalid_argument("label must be phishing or benign");
  r.label = *label;
  const auto language = ParseLanguage(j.at("language").get<std::string>());
  if (!language) throw std::invalid_argument("unknown language");
  r.language = *language;
  r.source = j.at("source").get<std::string>();
  r.generated = j.at("generated").get<bool>();
  return r;
}

std::size_t WriteCanonical(const Corpus& records, const std::filesystem::path& path) {
  if (const auto violation = CheckRecords(records)) {
    Fail(ErrorKind::kValidation,
         "refusing to write corpus: record '" + violation->id + "': " + violation->reason);
  }
  std::string content;
  for (const auto& r : records) {
    content += RecordToJsonLine(r);
    content += '\n';
  }
  WriteFileAtomic(path, content);
  return records.size();
}

Corpus LoadCanonical(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read corpus file " + path.string());
  Corpus records;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      records.push_back(RecordFromJsonLine(line));
    } catch (const std::exception& e) {
      Fail(ErrorKind::kValidation, path.string() + ":" + std::to_string(line_number) +
                                       ": malformed record: " + e.what());
    }
  }
  return records;
}

CorpusStats ComputeCorpusStats(const Corpus& records) {
  Require(!records.empty(), ErrorKind::kValidation, "corpus statistics need at least one record");
  CorpusStats stats;
  stats.total = records.size();
  double body_chars = 0.0;
  for (const auto& r : records) {
    (r.label == Label::kPhishing ? stats.phishing : stats.benign) += 1;
    stats.per_language[r.language].count += 1;
    body_chars += static_cast<double>(utf8::CodePointCount(r.body));
  }
  const auto total = static_cast<long long>(stats.total);
  for (auto& [language, share] : stats.per_language) {
    // round-half-up of 10000 * count / total, exact in integers
    share.percent_hundredths =
        (20000LL * static_cast<long long>(share.count) + total) / (2 * total);
  }
  stats.mean_body_length = body_chars / static_cast<double>(stats.total);
  return stats;
}

std::string CorpusStatsToJson(const CorpusStats& stats) {
  ordered_json j;
  j["total"] = stats.total;
  j["per_class"] = {{"phishing", stats.phishing}, {"benign", stats.benign}};
  ordered_json languages = ordered_json::object();
  for (const auto& [language, share] : stats.per_language) {
    char pct[32];
    std::snprintf(pct, sizeof(pct), "%lld.%02lld", share.percent_hundredths / 100,
                  share.percent_hundredths % 100);
    languages[LanguageName(language)] = {{"count", share.count}, {"percent", pct}};
  }
  j["per_language"] = languages;
  j["mean_body_length"] = stats.mean_body_length;
  return j.dump(2);
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) Fail(ErrorKind::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace phishbench
