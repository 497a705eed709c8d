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

#include "phishbench/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_set>

#include "phishbench/error.hpp"
#include "phishbench/text.hpp"

namespace phishbench {

void TfidfConfig::Validate() const {
  Require(subject_vocab_cap >= 1 && body_vocab_cap >= 1, ErrorKind::kValidation,
          "vocabulary caps must be >= 1");
  Require(min_doc_freq >= 1, ErrorKind::kValidation, "min_doc_freq must be >= 1");
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<double> idf)
    : terms_(std::move(terms)), idf_(std::move(idf)) {
  Require(terms_.size() == idf_.size(), ErrorKind::kValidation, "vocabulary/idf size mismatch");
  index_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    Require(index_.emplace(terms_[i], i).second, ErrorKind::kValidation,
            "duplicate vocabulary term '" + terms_[i] + "'");
  }
}

long Vocabulary::Find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

double SmoothIdf(std::size_t n_docs, std::size_t doc_freq) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(doc_freq))) +
         1.0;
}

namespace {

Vocabulary FitField(const std::vector<std::vector<std::string>>& docs, std::size_t cap,
                    std::size_t min_df) {
  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::unordered_set<std::string_view> unique(doc.begin(), doc.end());
    for (const auto term : unique) ++df[std::string(term)];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= min_df) kept.emplace_back(term, count);
  }
  if (kept.size() > cap) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    kept.resize(cap);
    std::sort(kept.begin(), kept.end());
  }
  std::vector<std::string> terms;
  std::vector<double> idf;
  for (auto& [term, count] : kept) {
    terms.push_back(term);
    idf.push_back(SmoothIdf(docs.size(), count));
  }
  return Vocabulary(std::move(terms), std::move(idf));
}

void AppendBlock(const Vocabulary& vocab, std::string_view text, std::uint32_t offset,
                 std::vector<SparseEntry>& out) {
  std::map<std::uint32_t, double> tf;
  for (const auto& term : Tokenize(text)) {
    const long index = vocab.Find(term);
    if (index >= 0) tf[static_cast<std::uint32_t>(index)] += 1.0;
  }
  double norm_sq = 0.0;
  std::vector<SparseEntry> block;
  block.reserve(tf.size());
  for (const auto& [index, count] : tf) {
    const double w = count * vocab.idf()[index];
    norm_sq += w * w;
    block.push_back({index + offset, w});
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& e : block) e.weight *= inv;
  }
  out.insert(out.end(), block.begin(), block.end());
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TfidfModel::TfidfModel(TfidfConfig config, Vocabulary subject, Vocabulary body,
                       std::size_t n_docs, Fingerprint fitted_on)
    : config_(config),
      subject_(std::move(subject)),
      body_(std::move(body)),
      n_docs_(n_docs),
      fitted_on_(std::move(fitted_on)) {}

TfidfModel FitTfidf(std::span<const EmailRecord> train, const TfidfConfig& config,
                    Fingerprint fitted_on) {
  config.Validate();
  Require(!train.empty(), ErrorKind::kValidation, "cannot fit TF-IDF on an empty training set");
  std::vector<std::vector<std::string>> subjects;
  std::vector<std::vector<std::string>> bodies;
  subjects.reserve(train.size());
  bodies.reserve(train.size());
  for (const auto& r : train) {
    subjects.push_back(Tokenize(r.subject));
    bodies.push_back(Tokenize(r.body));
  }
  return TfidfModel(config, FitField(subjects, config.subject_vocab_cap, config.min_doc_freq),
                    FitField(bodies, config.body_vocab_cap, config.min_doc_freq), train.size(),
                    std::move(fitted_on));
}

SparseVector TfidfModel::Transform(const EmailRecord& record) const {
  SparseVector v;
  v.dimension = dimension();
  AppendBlock(subject_, record.subject, 0, v.entries);
  AppendBlock(body_, record.body, static_cast<std::uint32_t>(subject_.size()), v.entries);
  return v;
}

std::vector<SparseVector> TfidfModel::TransformAll(std::span<const EmailRecord> records) const {
  std::vector<SparseVector> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(Transform(r));
  return out;
}

bool TfidfModel::operator==(const TfidfModel& other) const {
  return config_.subject_vocab_cap == other.config_.subject_vocab_cap &&
         config_.body_vocab_cap == other.config_.body_vocab_cap &&
         config_.min_doc_freq == other.config_.min_doc_freq &&
         subject_.terms() == other.subject_.terms() && subject_.idf() == other.subject_.idf() &&
         body_.terms() == other.body_.terms() && body_.idf() == other.body_.idf() &&
         n_docs_ == other.n_docs_ && fitted_on_ == other.fitted_on_;
}

// Text artifact:
//   phishbench-tfidf <version>
//   config <subject_cap> <body_cap> <min_df>
//   n_docs <n>
//   fitted_on <seed> <dataset>...
//   subject <count>   followed by <count> lines "<term>\t<idf>"
//   body <count>      likewise
//   end
std::string TfidfModel::Serialize() const {
  std::ostringstream out;
  out << "phishbench-tfidf " << kFormatVersion << '\n';
  out << "config " << config_.subject_vocab_cap << ' ' << config_.body_vocab_cap << ' '
      << config_.min_doc_freq << '\n';
  out << "n_docs " << n_docs_ << '\n';
  out << "fitted_on " << fitted_on_.seed;
  for (const auto& d : fitted_on_.datasets) out << ' ' << d;
  out << '\n';
  const auto block = [&](const char* name, const Vocabulary& vocab) {
    out << name << ' ' << vocab.size() << '\n';
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      out << vocab.terms()[i] << '\t' << FormatDouble(vocab.idf()[i]) << '\n';
    }
  };
  block("subject", subject_);
  block("body", body_);
  out << "end\n";
  return out.str();
}

TfidfModel TfidfModel::Deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  const auto bad = [](const std::string& what) {
    Fail(ErrorKind::kValidation, "malformed TF-IDF artifact: " + what);
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "phishbench-tfidf") bad("missing header");
  if (version != kFormatVersion) {
    Fail(ErrorKind::kValidation, "TF-IDF artifact format version " + std::to_string(version) +
                                     " is not supported (expected " +
                                     std::to_string(kFormatVersion) + ")");
  }
  std::string key;
  TfidfConfig config;
  if (!(in >> key >> config.subject_vocab_cap >> config.body_vocab_cap >> config.min_doc_freq) ||
      key != "config") {
    bad("config line");
  }
  std::size_t n_docs = 0;
  if (!(in >> key >> n_docs) || key != "n_docs") bad("n_docs line");
  Fingerprint fp;
  if (!(in >> key >> fp.seed) || key != "fitted_on") bad("fitted_on line");
  std::string rest;
  std::getline(in, rest);
  std::istringstream names(rest);
  for (std::string name; names >> name;) fp.datasets.push_back(name);
  const auto read_block = [&](const char* name) {
    std::size_t count = 0;
    if (!(in >> key >> count) || key != name) bad(std::string(name) + " block header");
    std::getline(in, rest);
    std::vector<std::string> terms;
    std::vector<double> idf;
    terms.reserve(count);
    idf.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::string line;
      if (!std::getline(in, line)) bad("truncated vocabulary");
      const auto tab = line.find('\t');
      if (tab == std::string::npos) bad("vocabulary line without tab");
      terms.push_back(line.substr(0, tab));
      idf.push_back(std::strtod(line.c_str() + tab + 1, nullptr));
    }
    return Vocabulary(std::move(terms), std::move(idf));
  };
  auto subject = read_block("subject");
  auto body = read_block("body");
  if (!(in >> key) || key != "end") bad("missing end marker");
  return TfidfModel(config, std::move(subject), std::move(body), n_docs, std::move(fp));
}

void TfidfModel::Save(const std::filesystem::path& path) const {
  WriteFileAtomic(path, Serialize());
}

TfidfModel TfidfModel::Load(const std::filesystem::path& path) {
  return Deserialize(ReadFile(path));
}

}  // namespace phishbench
