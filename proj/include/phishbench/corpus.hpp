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

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phishbench {

enum class Label { kPhishing, kBenign };
enum class Language { kEn, kIt, kDe, kUnknown };

const char* LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view name);
const char* LanguageName(Language language);
std::optional<Language> ParseLanguage(std::string_view name);

// Canonical standardized email.
struct EmailRecord {
  std::string id;
  std::string subject;
  std::string body;
  Label label = Label::kBenign;
  Language language = Language::kUnknown;
  std::string source;
  bool generated = false;

  bool operator==(const EmailRecord&) const = default;
};

using Corpus = std::vector<EmailRecord>;

enum class InputFormat { kCsvVariantA, kCsvVariantB, kJsonl };

const char* InputFormatName(InputFormat format);

// How one public dataset maps onto EmailRecord. Column names refer to the
// CSV header row (or JSON keys for jsonl inputs). An empty subject column
// means the source has no subjects; they become empty strings.
struct DatasetDescriptor {
  std::string name;
  std::size_t expected_total = 0;
  std::size_t expected_phishing = 0;
  std::size_t expected_benign = 0;
  InputFormat input_format = InputFormat::kCsvVariantA;
  std::string subject_column;
  std::string body_column;
  std::string label_column;
  // Raw label value (after trimming, compared case-insensitively) to class.
  std::map<std::string, Label> label_map;
  Language language = Language::kEn;
};

// Checked-in registry of dataset descriptors, loaded from a JSON document.
class DatasetRegistry {
 public:
  static DatasetRegistry Load(const std::filesystem::path& path);
  static DatasetRegistry FromJson(std::string_view json_text);

  const DatasetDescriptor& Get(std::string_view name) const;
  bool Contains(std::string_view name) const;
  std::vector<std::string> Names() const;

 private:
  std::vector<DatasetDescriptor> descriptors_;
};

// The eight descriptors with the published dataset sizes, as compiled-in
// defaults. data/datasets.json carries the same content.
DatasetRegistry BuiltinRegistry();

struct RejectedRow {
  std::size_t row = 0;  // 1-based data row number
  std::string reason;
};

struct IngestResult {
  Corpus records;
  std::vector<RejectedRow> rejects;
  std::vector<std::string> warnings;
};

IngestResult IngestDataset(const std::filesystem::path& path, const DatasetDescriptor& descriptor);

// Checks the EmailRecord invariants over a batch. Returns the id of the first
// violating record with a reason, or nullopt.
struct InvariantViolation {
  std::string id;
  std::string reason;
};
std::optional<InvariantViolation> CheckRecords(const Corpus& records);

std::string RecordToJsonLine(const EmailRecord& record);
EmailRecord RecordFromJsonLine(std::string_view line);

// One record object per line, UTF-8. Written to a temporary sibling and
// renamed into place.
std::size_t WriteCanonical(const Corpus& records, const std::filesystem::path& path);
Corpus LoadCanonical(const std::filesystem::path& path);

struct LanguageShare {
  std::size_t count = 0;
  // Percent of total rounded half-up to two decimals, stored in hundredths.
  long long percent_hundredths = 0;
  double percent() const { return percent_hundredths / 100.0; }
};

struct CorpusStats {
  std::size_t total = 0;
  std::size_t phishing = 0;
  std::size_t benign = 0;
  std::map<Language, LanguageShare> per_language;
  double mean_body_length = 0.0;  // code points
};

CorpusStats ComputeCorpusStats(const Corpus& records);
std::string CorpusStatsToJson(const CorpusStats& stats);

// Writes `content` to `path` through a temporary file and an atomic rename.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view content);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace phishbench
