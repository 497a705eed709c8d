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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phishbench/corpus.hpp"

namespace phishbench {

struct SparseEntry {
  std::uint32_t index = 0;
  double weight = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

// Indices strictly increasing and below `dimension`.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<SparseEntry> entries;

  bool operator==(const SparseVector&) const = default;
};

struct TfidfConfig {
  std::size_t subject_vocab_cap = 5000;
  std::size_t body_vocab_cap = 20000;
  std::size_t min_doc_freq = 2;

  void Validate() const;
};

// Provenance recorded in fitted models and reports.
struct Fingerprint {
  std::vector<std::string> datasets;
  std::uint64_t seed = 0;

  bool operator==(const Fingerprint&) const = default;
};

// One field's vocabulary. Terms are stored in index order (lexicographic).
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<double> idf);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  // -1 when the term is out of vocabulary.
  long Find(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Smooth IDF: ln((1 + n_docs) / (1 + doc_freq)) + 1.
double SmoothIdf(std::size_t n_docs, std::size_t doc_freq);

// Fitted subject and body vocabularies. Feature space is the subject block
// followed by the body block; each block is L2-normalized independently.
class TfidfModel {
 public:
  static constexpr int kFormatVersion = 1;

  TfidfModel() = default;
  TfidfModel(TfidfConfig config, Vocabulary subject, Vocabulary body, std::size_t n_docs,
             Fingerprint fitted_on);

  const TfidfConfig& config() const { return config_; }
  const Vocabulary& subject_vocabulary() const { return subject_; }
  const Vocabulary& body_vocabulary() const { return body_; }
  std::size_t n_docs() const { return n_docs_; }
  const Fingerprint& fitted_on() const { return fitted_on_; }
  std::size_t dimension() const { return subject_.size() + body_.size(); }

  SparseVector Transform(const EmailRecord& record) const;
  std::vector<SparseVector> TransformAll(std::span<const EmailRecord> records) const;

  std::string Serialize() const;
  static TfidfModel Deserialize(std::string_view text);
  void Save(const std::filesystem::path& path) const;
  static TfidfModel Load(const std::filesystem::path& path);

  bool operator==(const TfidfModel& other) const;

 private:
  TfidfConfig config_;
  Vocabulary subject_;
  Vocabulary body_;
  std::size_t n_docs_ = 0;
  Fingerprint fitted_on_;
};

// Fits on the training records only.
TfidfModel FitTfidf(std::span<const EmailRecord> train, const TfidfConfig& config,
                    Fingerprint fitted_on = {});

}  // namespace phishbench
