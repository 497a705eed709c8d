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

#include <cmath>
#include <unordered_map>

#include "json.hpp"
#include "phishbench/evaluation.hpp"

namespace phishbench {

using nlohmann::ordered_json;

namespace {

constexpr const char* kDetectorFormat = "phishbench-detector";
constexpr const char* kPredictionsFormat = "phishbench-predictions";

std::string Join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

}  // namespace

Detector::Detector(TfidfModel tfidf, TrainedModel model, std::vector<std::string> train_ids,
                   std::vector<std::string> train_sources)
    : tfidf_(std::move(tfidf)),
      model_(std::move(model)),
      train_ids_(std::move(train_ids)),
      train_sources_(std::move(train_sources)) {
  Require(model_.feature_dimension() == tfidf_.dimension(), ErrorKind::kValidation,
          "detector model dimension " + std::to_string(model_.feature_dimension()) +
              " does not match its transform (" + std::to_string(tfidf_.dimension()) + ")");
}

std::string Detector::Name() const {
  return std::string(FamilyName(model_.spec().family)) + "@" + Join(train_sources_, '+');
}

std::vector<Label> Detector::Predict(const Corpus& corpus) const { return model_.Predict(tfidf_.TransformAll(corpus)); }

std::vector<double> Detector::Scores(const Corpus& corpus) const {
  return model_.PredictScores(tfidf_.TransformAll(corpus));
}

std::string Detector::Serialize() const {
  ordered_json j;
  j["format"] = kDetectorFormat;
  j["version"] = 1;
  j["train_sources"] = train_sources_;
  j["train_ids"] = train_ids_;
  j["tfidf"] = tfidf_.Serialize();
  j["model"] = ordered_json::parse(model_.Serialize());
  return j.dump();
}

Detector Detector::Deserialize(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    Require(j.value("format", "") == kDetectorFormat, ErrorKind::kValidation, "not a detector file");
    Require(j.value("version", 0) == 1, ErrorKind::kValidation,
            "unsupported detector version " + std::to_string(j.value("version", 0)));
    return Detector(TfidfModel::Deserialize(j.at("tfidf").get<std::string>()), TrainedModel::Deserialize(j.at("model").dump()),
                    j.at("train_ids").get<std::vector<std::string>>(),
                    j.at("train_sources").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kValidation, std::string("malformed detector file: ") + e.what());
  }
}

void Detector::Save(const std::filesystem::path& path) const { WriteFileAtomic(path, Serialize()); }

Detector Detector::Load(const std::filesystem::path& path) { return Deserialize(ReadFile(path)); }

Detector TrainDetector(const Corpus& train, std::vector<std::string> sources, const ModelSpec& spec,
                       const TfidfConfig& tfidf) {
  Require(!train.empty(), ErrorKind::kValidation, "empty training corpus");
  const Fingerprint fingerprint{sources, spec.seed};
  auto transform = FitTfidf(train, tfidf, fingerprint);
  const auto x = transform.TransformAll(train);
  std::vector<Label> y;
  std::vector<std::string> ids;
  for (const auto& r : train) {
    y.push_back(r.label);
    ids.push_back(r.id);
  }
  auto model = Train(spec, x, y, fingerprint);
  return Detector(std::move(transform), std::move(model), std::move(ids), std::move(sources));
}

MetricsReport RunExternalTest(const Detector& detector, const Corpus& test, std::string_view test_source) {
  Require(!test.empty(), ErrorKind::kValidation, "empty test corpus");
  std::vector<std::string> ids;
  std::vector<Label> gold;
  for (const auto& r : test) {
    ids.push_back(r.id);
    gold.push_back(r.label);
  }
  AssertNoLeak(detector.train_ids(), ids, detector.Name() + " on " + std::string(test_source));
  auto m = ComputeMetrics(detector.Predict(test), gold);
  m.model_id = detector.Name();
  m.train_source = Join(detector.train_sources(), '+');
  m.test_source = std::string(test_source);
  m.group = "external";
  m.seed = detector.model().spec().seed;
  return m;
}

PredictionsFile ParsePredictions(std::string_view text) {
  PredictionsFile file;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string where = "predictions line " + std::to_string(line_no) + ": ";
    ordered_json j = ordered_json::parse(line.begin(), line.end(), nullptr, false);
    Require(!j.is_discarded() && j.is_object(), ErrorKind::kValidation, where + "not a JSON object");
    if (j.contains("format")) {
      Require(first, ErrorKind::kValidation, where + "header allowed only on the first line");
      Require(j["format"] == kPredictionsFormat, ErrorKind::kValidation, where + "unknown format");
      Require(j.value("version", 0) == 1, ErrorKind::kValidation, where + "unsupported version");
      j.erase("format");
      j.erase("version");
      file.metadata_json = j.dump();
      first = false;
      continue;
    }
    first = false;
    Prediction p;
    const auto id = j.find("id");
    Require(id != j.end() && id->is_string() && !id->get<std::string>().empty(), ErrorKind::kValidation,
            where + "missing id");
    p.id = id->get<std::string>();
    const auto label = j.find("label");
    Require(label != j.end() && label->is_string(), ErrorKind::kValidation, where + "missing label");
    const auto parsed = ParseLabel(label->get<std::string>());
    Require(parsed.has_value(), ErrorKind::kValidation, where + "label must be phishing or benign");
    p.label = *parsed;
    const auto score = j.find("score");
    Require(score != j.end() && score->is_number(), ErrorKind::kValidation, where + "missing score");
    p.score = score->get<double>();
    Require(std::isfinite(p.score) && p.score >= 0.0 && p.score <= 1.0, ErrorKind::kValidation,
            where + "score outside [0, 1]");
    file.predictions.push_back(std::move(p));
  }
  return file;
}

PredictionsFile LoadPredictions(const std::filesystem::path& path) { return ParsePredictions(ReadFile(path)); }

std::string SerializePredictions(const PredictionsFile& file) {
  ordered_json header;
  header["format"] = kPredictionsFormat;
  header["version"] = 1;
  const auto meta = ordered_json::parse(file.metadata_json);
  for (const auto& [k, v] : meta.items()) header[k] = v;
  std::string out = header.dump() + "\n";
  for (const auto& p : file.predictions) {
    ordered_json j;
    j["id"] = p.id;
    j["label"] = LabelName(p.label);
    j["score"] = p.score;
    out += j.dump() + "\n";
  }
  return out;
}

void SavePredictions(const PredictionsFile& file, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializePredictions(file));
}

void ValidatePredictions(const PredictionsFile& file, const Corpus& corpus) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < file.predictions.size(); ++i) {
    Require(index.emplace(file.predictions[i].id, i).second, ErrorKind::kValidation,
            "duplicate prediction for id '" + file.predictions[i].id + "'");
  }
  std::size_t matched = 0;
  for (const auto& r : corpus) {
    Require(index.count(r.id) > 0, ErrorKind::kValidation, "missing prediction for id '" + r.id + "'");
    ++matched;
  }
  if (matched != file.predictions.size()) {
    std::unordered_map<std::string, bool> known;
    for (const auto& r : corpus) known[r.id] = true;
    for (const auto& p : file.predictions) {
      Require(known.count(p.id) > 0, ErrorKind::kValidation, "prediction for unknown id '" + p.id + "'");
    }
  }
}

MetricsReport MetricsFromPredictions(const PredictionsFile& file, const Corpus& corpus,
                                     std::string_view model_id, std::string_view test_source) {
  Require(!corpus.empty(), ErrorKind::kValidation, "empty test corpus");
  ValidatePredictions(file, corpus);
  std::unordered_map<std::string, Label> by_id;
  for (const auto& p : file.predictions) by_id[p.id] = p.label;
  std::vector<Label> predicted;
  std::vector<Label> gold;
  for (const auto& r : corpus) {
    predicted.push_back(by_id.at(r.id));
    gold.push_back(r.label);
  }
  auto m = ComputeMetrics(predicted, gold);
  const auto meta = ordered_json::parse(file.metadata_json);
  m.model_id = model_id.empty() ? meta.value("model", std::string("predictions")) : std::string(model_id);
  m.train_source = meta.value("train", std::string());
  m.test_source = std::string(test_source);
  m.group = "external";
  if (meta.contains("seed") && meta["seed"].is_number_unsigned()) m.seed = meta["seed"].get<std::uint64_t>();
  return m;
}

PredictionsFile PredictionsFor(const Detector& detector, const Corpus& corpus) {
  PredictionsFile file;
  ordered_json meta;
  meta["model"] = detector.Name();
  meta["family"] = FamilyName(detector.model().spec().family);
  meta["train"] = Join(detector.train_sources(), '+');
  meta["seed"] = detector.model().spec().seed;
  file.metadata_json = meta.dump();
  const auto x = detector.tfidf().TransformAll(corpus);
  const auto labels = detector.model().Predict(x);
  const auto scores = detector.model().PredictScores(x);
  for (std::size_t i = 0; i < corpus.size(); ++i) file.predictions.push_back({corpus[i].id, labels[i], scores[i]});
  return file;
}

}  // namespace phishbench
