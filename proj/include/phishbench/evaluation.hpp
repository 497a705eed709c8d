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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phishbench/classifiers.hpp"
#include "phishbench/corpus.hpp"
#include "phishbench/features.hpp"
#include "phishbench/llm.hpp"
#include "phishbench/stats.hpp"

namespace phishbench {

// Per class, record indices in corpus order are shuffled with
// Rng(DeriveSeed(seed, c)) (c = 0 phishing, 1 benign); the first
// round_half_up((1 - ratio) * n_c), at least 1, go to test. Index lists are
// returned sorted.
struct SplitPlan {
  std::uint64_t seed = 0;
  double ratio = 0.7;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

SplitPlan StratifiedSplit(const Corpus& corpus, double ratio, std::uint64_t seed);
std::size_t StratifiedTestCount(std::size_t class_size, double ratio);

// Throws kValidation when any test id also appears among the training ids.
void AssertNoLeak(std::span<const std::string> train_ids, std::span<const std::string> test_ids,
                  std::string_view context);

struct MetricsReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t invalid_count = 0;
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
  std::uint64_t seed = 0;
  std::string model_id;      // family name, provider id or detector name
  std::string train_source;  // dataset names joined by '+'; empty for zero-shot
  std::string test_source;
  std::string group;         // cross, holdout, constituent, single, llm, external

  std::size_t total() const { return tp + fp + tn + fn; }
};

// Phishing is the positive class. Ratios with a zero denominator are 0.
MetricsReport MetricsFromCounts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);
MetricsReport ComputeMetrics(std::span<const Label> predictions, std::span<const Label> gold);
// Invalid verdicts count as benign predictions and are tallied.
MetricsReport ComputeMetrics(std::span<const Verdict> predictions, std::span<const Label> gold);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 when n < 2
};
Summary Summarize(std::span<const double> values);

// A named canonical corpus taking part in an experiment.
struct DatasetInput {
  std::string name;
  Corpus corpus;
};

struct ModelChoice {
  ModelFamily family = ModelFamily::kLR;
  Hyperparameters overrides;
};

struct ExperimentOptions {
  std::vector<ModelChoice> models;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  TfidfConfig tfidf;
  double train_ratio = 0.7;
  std::size_t jobs = 1;
  const std::atomic<bool>* cancel = nullptr;
};

struct CellError {
  std::string model_id;
  std::string train_source;
  std::string test_source;
  std::uint64_t seed = 0;
  std::string message;
};

// Flat experiment output; every aggregate is derived from `runs`.
struct ResultSet {
  std::string experiment;  // cross-eval, all-vs-one, llm-eval, external-test
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  std::vector<std::uint64_t> seeds;
  double train_ratio = 0.7;
  std::vector<MetricsReport> runs;
  std::vector<CellError> errors;
  std::vector<std::string> notes;  // e.g. sampling disclosure, skipped providers
  bool partial = false;
};

// Cross-evaluation: per (train dataset, seed) one TF-IDF fit on the train split;
// every model is tested on the test split of every dataset. The model seed is
// DeriveSeed(seed, HashName("<train>/<family>")).
ResultSet RunExperiment1(const std::vector<DatasetInput>& datasets, const ExperimentOptions& options);

// All-vs-one: per holdout, train on the union of the other datasets' train
// splits; test on the holdout's test split (group "holdout") and on each
// constituent's test split (group "constituent"). Single-dataset models
// tested on their own split are added as group "single". Empty `holdouts`
// means every dataset.
ResultSet RunExperiment2(const std::vector<DatasetInput>& datasets, const ExperimentOptions& options,
                         const std::vector<std::string>& holdouts = {});

struct CellSummary {
  std::string model_id;
  std::string train_source;
  std::string test_source;
  std::string group;
  Summary f1, precision, recall, accuracy;
  std::size_t invalid_count = 0;  // summed over seeds
};

// Runs aggregated per (group, model, train, test), in first-appearance order.
std::vector<CellSummary> SummarizeCells(const ResultSet& results);

struct CrossEvalMatrix {
  std::string model_id;
  std::vector<std::string> datasets;
  // cells[i][j]: train datasets[i], test datasets[j]; nullopt marks a hole.
  std::vector<std::vector<std::optional<CellSummary>>> cells;
  // Mean over off-diagonal non-hole columns of (diagonal - cell) mean F1;
  // absent without a diagonal or without off-diagonal cells.
  std::vector<std::optional<double>> avg_drop;
};

CrossEvalMatrix BuildMatrix(const ResultSet& results, std::string_view model_id);

// Welch test on two samples with both readings of a 0.05 threshold.
struct Comparison {
  std::string label_a, label_b;
  Summary a, b;
  std::optional<TTestResult> test;
  std::string error;

  bool RejectsEquality() const { return test && test->p_value < 0.05; }
};
Comparison Compare(std::string label_a, std::span<const double> a, std::string label_b,
                   std::span<const double> b);

// Pairwise family comparisons on the diagonal (cross-eval) or single/holdout
// runs, plus Single vs AllvsOne per family for all-vs-one results.
std::vector<Comparison> StandardComparisons(const ResultSet& results);

struct LlmEvalOptions {
  std::optional<std::size_t> sample;  // seeded subsample size
  std::uint64_t sample_seed = 0;
  std::size_t jobs = 1;
  const std::atomic<bool>* cancel = nullptr;
  ExchangeLog* log = nullptr;
};

// Sorted indices of a seeded sample without replacement.
std::vector<std::size_t> SampleIndices(std::size_t n, std::size_t k, std::uint64_t seed);

// Zero-shot evaluation of one client. Records are classified concurrently unless the
// provider is order-sensitive.
MetricsReport EvaluateLlm(LlmClient& client, const Corpus& corpus, std::string_view test_source,
                          const LlmEvalOptions& options, std::vector<DetectionVerdict>* verdicts = nullptr);

// Zero-shot evaluation over several providers; a provider whose client cannot be
// built is skipped and recorded in `notes` and `errors`.
ResultSet RunExperiment3(const Corpus& corpus, std::string_view test_source,
                         const std::vector<ProviderConfig>& providers, const LlmEvalOptions& options);

// A fitted TF-IDF transform with a model trained on its output.
class Detector {
 public:
  Detector(TfidfModel tfidf, TrainedModel model, std::vector<std::string> train_ids,
           std::vector<std::string> train_sources);

  const TfidfModel& tfidf() const { return tfidf_; }
  const TrainedModel& model() const { return model_; }
  const std::vector<std::string>& train_ids() const { return train_ids_; }
  const std::vector<std::string>& train_sources() const { return train_sources_; }
  std::string Name() const;  // "<family>@<sources joined by '+'>"

  std::vector<Label> Predict(const Corpus& corpus) const;
  std::vector<double> Scores(const Corpus& corpus) const;

  std::string Serialize() const;
  static Detector Deserialize(std::string_view text);
  void Save(const std::filesystem::path& path) const;
  static Detector Load(const std::filesystem::path& path);

 private:
  TfidfModel tfidf_;
  TrainedModel model_;
  std::vector<std::string> train_ids_;
  std::vector<std::string> train_sources_;
};

// Fits TF-IDF and the model on all of `train` (records keep their ids).
Detector TrainDetector(const Corpus& train, std::vector<std::string> sources, const ModelSpec& spec,
                       const TfidfConfig& tfidf = {});

// Test-only evaluation with the train-time transform. Refuses empty corpora
// and any overlap with the detector's training ids.
MetricsReport RunExternalTest(const Detector& detector, const Corpus& test, std::string_view test_source);

// Predictions file: optional first line {"format": "phishbench-predictions",
// "version": 1, ...metadata}, then one {"id", "label", "score"} object per
// line.
struct Prediction {
  std::string id;
  Label label = Label::kBenign;
  double score = 0.0;
};

struct PredictionsFile {
  std::string metadata_json = "{}";  // header object without format and version
  std::vector<Prediction> predictions;
};

// Schema errors are kValidation naming the 1-based line.
PredictionsFile ParsePredictions(std::string_view text);
PredictionsFile LoadPredictions(const std::filesystem::path& path);
std::string SerializePredictions(const PredictionsFile& file);
void SavePredictions(const PredictionsFile& file, const std::filesystem::path& path);

// Ids must cover the corpus exactly: no duplicates, none missing, none extra.
void ValidatePredictions(const PredictionsFile& file, const Corpus& corpus);
// Validates, then scores the predicted labels against the corpus labels.
MetricsReport MetricsFromPredictions(const PredictionsFile& file, const Corpus& corpus,
                                     std::string_view model_id, std::string_view test_source);
PredictionsFile PredictionsFor(const Detector& detector, const Corpus& corpus);

// Line-delimited results: a header line, one line per run, one per error and
// one summary line per cell (summaries are ignored when reading back).
std::string ResultsToJsonl(const ResultSet& results);
ResultSet ResultsFromJsonl(std::string_view text);

// Writes results.jsonl, summary.json (cells, drops, comparisons) and
// plot.csv into `dir`, plus matrix_<model>.csv per model for cross-eval and
// all_vs_one_<model>.csv for all-vs-one. Empty results are refused.
void ExportReport(const ResultSet& results, const std::filesystem::path& dir);

}  // namespace phishbench
