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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "phishbench/classifiers.hpp"
#include "phishbench/error.hpp"
#include "phishbench/features.hpp"
#include "phishbench/rng.hpp"
#include "test_util.hpp"
#include "oracles.hpp"

namespace phishbench {
namespace {

using testing::MakeRecord;

SparseVector Dense(std::initializer_list<double> values) {
  SparseVector v;
  v.dimension = values.size();
  std::uint32_t i = 0;
  for (const double x : values) {
    if (x != 0.0) v.entries.push_back({i, x});
    ++i;
  }
  return v;
}

// Two noisy clusters in `dim` dimensions, the first half of features
// carrying phishing signal.
void SyntheticData(std::size_t n, std::size_t dim, std::uint64_t seed, std::vector<SparseVector>& x,
                   std::vector<Label>& y) {
  Rng rng(seed);
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const bool phishing = (i % 2) == 0;
    SparseVector v;
    v.dimension = dim;
    double norm = 0.0;
    for (std::uint32_t j = 0; j < dim; ++j) {
      const bool signal = (j < dim / 2) == phishing;
      if (rng.Uniform() < (signal ? 0.3 : 0.1)) {
        const double w = rng.Uniform(0.1, 1.0);
        v.entries.push_back({j, w});
        norm += w * w;
      }
    }
    for (auto& e : v.entries) e.weight /= std::sqrt(norm > 0 ? norm : 1.0);
    x.push_back(v);
    y.push_back(phishing ? Label::kPhishing : Label::kBenign);
  }
}

double Accuracy(const TrainedModel& m, const std::vector<SparseVector>& x, const std::vector<Label>& y) {
  const auto pred = m.Predict(x);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += pred[i] == y[i];
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

TEST(ModelSpec, DefaultsAndValidation) {
  const auto spec = ModelSpec::Make(ModelFamily::kRF, 3);
  EXPECT_EQ(spec.Get("n_trees"), 100);
  EXPECT_EQ(spec.Get("max_depth"), 40);
  EXPECT_EQ(ModelSpec::Make(ModelFamily::kMLP, 0).Get("batch"), 64);
  EXPECT_THROW(ModelSpec::Make(ModelFamily::kNB, 0, {{"alpha", 0.0}}), Error);
  EXPECT_THROW(ModelSpec::Make(ModelFamily::kLR, 0, {{"bogus", 1.0}}), Error);
  EXPECT_THROW(ModelSpec::Make(ModelFamily::kRF, 0, {{"n_trees", 2.5}}), Error);
  EXPECT_EQ(ParseFamily("SVM"), ModelFamily::kSVM);
  EXPECT_THROW(ParseFamily("knn"), Error);
}

TEST(LogisticRegression, SeparablePointsReachFullTrainingAccuracy) {
  const std::vector<SparseVector> x = {Dense({1, 0}), Dense({0.9, 0.1}), Dense({0, 1}),
                                       Dense({0.1, 0.9})};
  const std::vector<Label> y = {Label::kPhishing, Label::kPhishing, Label::kBenign, Label::kBenign};
  const auto model = Train(ModelSpec::Make(ModelFamily::kLR, 0), x, y);
  EXPECT_EQ(Accuracy(model, x, y), 1.0);
}

TEST(LogisticRegression, ZeroWeightsScoreHalfAndPredictPhishing) {
  const TrainedModel model(ModelSpec::Make(ModelFamily::kLR, 0), LinearState{{0.0, 0.0}, 0.0}, 2, {});
  const std::vector<SparseVector> x = {Dense({0.3, 0.7})};
  EXPECT_EQ(model.PredictScores(x)[0], 0.5);
  EXPECT_EQ(model.Predict(x)[0], Label::kPhishing);
}

TEST(Svm, ZeroMarginIsPhishing) {
  const TrainedModel model(ModelSpec::Make(ModelFamily::kSVM, 0), LinearState{{1.0, -1.0}, 0.0}, 2, {});
  const std::vector<SparseVector> x = {Dense({0.5, 0.5}), Dense({0.2, 0.8})};
  const auto pred = model.Predict(x);
  EXPECT_EQ(pred[0], Label::kPhishing);
  EXPECT_EQ(pred[1], Label::kBenign);
}

TEST(RandomForest, TiedVoteIsBenign) {
  DecisionTree yes;
  yes.nodes.push_back({-1, 0.0, -1, -1, Label::kPhishing});
  DecisionTree no;
  no.nodes.push_back({-1, 0.0, -1, -1, Label::kBenign});
  const TrainedModel model(ModelSpec::Make(ModelFamily::kRF, 0, {{"n_trees", 2}}),
                           ForestState{{yes, no}}, 1, {});
  const std::vector<SparseVector> x = {Dense({1.0})};
  EXPECT_EQ(model.Predict(x)[0], Label::kBenign);
  EXPECT_EQ(model.PredictScores(x)[0], 0.5);
}

TEST(NaiveBayes, WinMoneyToyMatchesHandBayes) {
  const Corpus train = {MakeRecord("p", "", "win money", Label::kPhishing),
                        MakeRecord("b", "", "meeting notes", Label::kBenign)};
  const auto tfidf = FitTfidf(train, TfidfConfig{10, 10, 1});
  ASSERT_EQ(tfidf.dimension(), 4u);
  const auto x = tfidf.TransformAll(train);
  const std::vector<Label> y = {Label::kPhishing, Label::kBenign};
  const auto model = Train(ModelSpec::Make(ModelFamily::kNB, 0), x, y);
  const oracle::HandBayes oracle(x, y, 4, 1.0);

  for (const auto* text : {"win", "win money now", "meeting", "notes now"}) {
    const auto v = tfidf.Transform(MakeRecord("q", "", text, Label::kBenign));
    const auto got = model.NaiveBayesLogJoint(v);
    const auto want = oracle.LogJoint(v);
    EXPECT_NEAR(got[0], want[0], 1e-9) << text;
    EXPECT_NEAR(got[1], want[1], 1e-9) << text;
    const std::vector<SparseVector> one = {v};
    EXPECT_EQ(model.Predict(one)[0], want[0] >= want[1] ? Label::kPhishing : Label::kBenign) << text;
  }
  const std::vector<SparseVector> probe = {
      tfidf.Transform(MakeRecord("q", "", "win", Label::kBenign)),
      tfidf.Transform(MakeRecord("q", "", "win money now", Label::kBenign))};
  EXPECT_EQ(model.Predict(probe)[0], Label::kPhishing);
  EXPECT_EQ(model.Predict(probe)[1], Label::kPhishing);
}

TEST(NaiveBayes, RandomToyCorporaMatchHandBayes) {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    const std::size_t d = 1 + rng.Below(10);
    std::vector<SparseVector> x;
    std::vector<Label> y;
    const std::size_t n = 2 + rng.Below(6);
    for (std::size_t i = 0; i < n; ++i) {
      SparseVector v;
      v.dimension = d;
      for (std::uint32_t j = 0; j < d; ++j) {
        if (rng.Uniform() < 0.5) v.entries.push_back({j, rng.Uniform(0.0, 2.0)});
      }
      x.push_back(v);
      y.push_back(i == 0 ? Label::kPhishing : i == 1 ? Label::kBenign
                                                      : (rng.Below(2) ? Label::kPhishing : Label::kBenign));
    }
    const double alpha = rng.Uniform(0.1, 2.0);
    const auto model = Train(ModelSpec::Make(ModelFamily::kNB, 0, {{"alpha", alpha}}), x, y);
    const oracle::HandBayes oracle(x, y, d, alpha);
    for (const auto& v : x) {
      const auto got = model.NaiveBayesLogJoint(v);
      const auto want = oracle.LogJoint(v);
      ASSERT_NEAR(got[0], want[0], 1e-9);
      ASSERT_NEAR(got[1], want[1], 1e-9);
    }
  }
}

TEST(Train, RejectsBadInputs) {
  const auto spec = ModelSpec::Make(ModelFamily::kLR, 0);
  std::vector<SparseVector> x = {Dense({1, 0}), Dense({0, 1})};
  std::vector<Label> same = {Label::kBenign, Label::kBenign};
  EXPECT_THROW(Train(spec, x, same), Error);
  std::vector<Label> one = {Label::kBenign};
  EXPECT_THROW(Train(spec, x, one), Error);
  std::vector<SparseVector> mixed = {Dense({1, 0}), Dense({0, 1, 0})};
  std::vector<Label> both = {Label::kPhishing, Label::kBenign};
  EXPECT_THROW(Train(spec, mixed, both), Error);
  const auto m = Train(spec, x, both);
  const std::vector<SparseVector> wrong = {Dense({1, 0, 0})};
  EXPECT_THROW(m.Predict(wrong), Error);
}

class FamilyTest : public ::testing::TestWithParam<ModelFamily> {};

TEST_P(FamilyTest, LearnsSyntheticClustersDeterministically) {
  std::vector<SparseVector> x;
  std::vector<Label> y;
  SyntheticData(400, 60, 5, x, y);
  std::vector<SparseVector> tx;
  std::vector<Label> ty;
  SyntheticData(200, 60, 6, tx, ty);
  Hyperparameters small;
  if (GetParam() == ModelFamily::kRF) small["n_trees"] = 25;
  const auto spec = ModelSpec::Make(GetParam(), 42, small);
  const auto a = Train(spec, x, y, {{"synthetic"}, 42});
  const auto b = Train(spec, x, y, {{"synthetic"}, 42});
  EXPECT_GE(Accuracy(a, tx, ty), 0.85) << FamilyName(GetParam());
  EXPECT_EQ(a.Serialize(), b.Serialize());
  const auto scores = a.PredictScores(tx);
  for (const double s : scores) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST_P(FamilyTest, SerializationRoundTripPreservesPredictions) {
  std::vector<SparseVector> x;
  std::vector<Label> y;
  SyntheticData(120, 20, 9, x, y);
  Hyperparameters small;
  if (GetParam() == ModelFamily::kRF) small["n_trees"] = 5;
  if (GetParam() == ModelFamily::kMLP) small["hidden"] = 8;
  const auto model = Train(ModelSpec::Make(GetParam(), 7, small), x, y, {{"a", "b"}, 7});
  const auto path = testing::ScratchDir("model") / "m.json";
  model.Save(path);
  const auto loaded = TrainedModel::Load(path);
  EXPECT_EQ(loaded.Serialize(), model.Serialize());
  EXPECT_EQ(loaded.PredictScores(x), model.PredictScores(x));
  EXPECT_EQ(loaded.training_fingerprint(), model.training_fingerprint());
  EXPECT_EQ(loaded.feature_dimension(), 20u);
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, FamilyTest,
                         ::testing::Values(ModelFamily::kLR, ModelFamily::kNB, ModelFamily::kRF,
                                           ModelFamily::kSVM, ModelFamily::kMLP),
                         [](const auto& info) { return std::string(FamilyName(info.param)); });

TEST(ModelFile, VersionMismatchFailsLoudly) {
  std::vector<SparseVector> x = {Dense({1, 0}), Dense({0, 1})};
  std::vector<Label> y = {Label::kPhishing, Label::kBenign};
  auto text = Train(ModelSpec::Make(ModelFamily::kNB, 0), x, y).Serialize();
  const auto pos = text.find("\"version\":1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 11, "\"version\":9");
  try {
    TrainedModel::Deserialize(text);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("version 9"), std::string::npos);
  }
}

}  // namespace
}  // namespace phishbench
