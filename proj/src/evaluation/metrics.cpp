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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "phishbench/evaluation.hpp"
#include "phishbench/rng.hpp"

namespace phishbench {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t StratifiedTestCount(std::size_t class_size, double ratio) {
  // The epsilon absorbs representation error so that exact halves round up.
  const double raw = (1.0 - ratio) * static_cast<double>(class_size);
  auto count = static_cast<std::size_t>(std::floor(raw + 0.5 + 1e-9));
  count = std::max<std::size_t>(count, 1);
  return std::min(count, class_size - 1);
}

SplitPlan StratifiedSplit(const Corpus& corpus, double ratio, std::uint64_t seed) {
  Require(ratio > 0.0 && ratio < 1.0, ErrorKind::kValidation, "train ratio must be in (0, 1)");
  SplitPlan plan;
  plan.seed = seed;
  plan.ratio = ratio;
  for (const auto label : {Label::kPhishing, Label::kBenign}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].label == label) members.push_back(i);
    }
    Require(members.size() >= 2, ErrorKind::kValidation,
            std::string("stratified split needs at least 2 ") + LabelName(label) + " records, found " +
                std::to_string(members.size()));
    Rng rng(DeriveSeed(seed, label == Label::kPhishing ? 0 : 1));
    rng.Shuffle(members);
    const std::size_t n_test = StratifiedTestCount(members.size(), ratio);
    plan.test.insert(plan.test.end(), members.begin(), members.begin() + static_cast<long>(n_test));
    plan.train.insert(plan.train.end(), members.begin() + static_cast<long>(n_test), members.end());
  }
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

void AssertNoLeak(std::span<const std::string> train_ids, std::span<const std::string> test_ids,
                  std::string_view context) {
  const std::unordered_set<std::string> train(train_ids.begin(), train_ids.end());
  for (const auto& id : test_ids) {
    if (train.count(id)) {
      Fail(ErrorKind::kValidation,
           "data leak in " + std::string(context) + ": test record '" + id + "' was used for training");
    }
  }
}

MetricsReport MetricsFromCounts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  MetricsReport m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  m.accuracy = Ratio(tp + tn, tp + fp + tn + fn);
  m.precision = Ratio(tp, tp + fp);
  m.recall = Ratio(tp, tp + fn);
  // Equal to 2PR/(P+R) whenever that is defined, and a single rounding.
  m.f1 = Ratio(2 * tp, 2 * tp + fp + fn);
  return m;
}

MetricsReport ComputeMetrics(std::span<const Label> predictions, std::span<const Label> gold) {
  Require(predictions.size() == gold.size(), ErrorKind::kValidation,
          "predictions and gold labels differ in length (" + std::to_string(predictions.size()) + " vs " +
              std::to_string(gold.size()) + ")");
  Require(!gold.empty(), ErrorKind::kValidation, "no predictions to score");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool predicted = predictions[i] == Label::kPhishing;
    const bool actual = gold[i] == Label::kPhishing;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  return MetricsFromCounts(tp, fp, tn, fn);
}

MetricsReport ComputeMetrics(std::span<const Verdict> predictions, std::span<const Label> gold) {
  std::vector<Label> labels(predictions.size());
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    labels[i] = predictions[i] == Verdict::kPhishing ? Label::kPhishing : Label::kBenign;
    if (predictions[i] == Verdict::kInvalid) ++invalid;
  }
  auto m = ComputeMetrics(labels, gold);
  m.invalid_count = invalid;
  return m;
}

Summary Summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::vector<std::size_t> SampleIndices(std::size_t n, std::size_t k, std::uint64_t seed) {
  Require(k >= 1 && k <= n, ErrorKind::kValidation,
          "sample size must be between 1 and the corpus size (" + std::to_string(n) + ")");
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(n - i));
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

Comparison Compare(std::string label_a, std::span<const double> a, std::string label_b,
                   std::span<const double> b) {
  Comparison c;
  c.label_a = std::move(label_a);
  c.label_b = std::move(label_b);
  c.a = Summarize(a);
  c.b = Summarize(b);
  try {
    c.test = WelchTTest(a, b);
  } catch (const Error& e) {
    c.error = e.what();
  }
  return c;
}

}  // namespace phishbench
