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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phishbench/corpus.hpp"
#include "phishbench/features.hpp"

namespace phishbench {

enum class ModelFamily { kLR, kNB, kRF, kSVM, kMLP };

const char* FamilyName(ModelFamily family);  // "lr", "nb", ...
ModelFamily ParseFamily(std::string_view name);
const std::vector<ModelFamily>& AllFamilies();

using Hyperparameters = std::map<std::string, double>;

// Family defaults:
//   lr:  l2=1e-4 tol=1e-6 max_epochs=1000
//   nb:  alpha=1
//   rf:  n_trees=100 max_depth=40 max_features=0 (0 means floor(sqrt(d)))
//        min_samples_split=2
//   svm: l2=1e-4 epochs=10
//   mlp: hidden=100 epochs=20 batch=64 step=0.01
Hyperparameters DefaultHyperparameters(ModelFamily family);

struct ModelSpec {
  ModelFamily family = ModelFamily::kLR;
  Hyperparameters hyperparameters;
  std::uint64_t seed = 0;

  // Spec with the family defaults, optionally overridden.
  static ModelSpec Make(ModelFamily family, std::uint64_t seed, const Hyperparameters& overrides = {});
  // Rejects unknown keys and out-of-range values.
  void Validate() const;
  double Get(const std::string& key) const;
};

struct LinearState {
  std::vector<double> weights;
  double bias = 0.0;
};

struct NaiveBayesState {
  // Index 0 is phishing, 1 is benign.
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // go left when value <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  Label label = Label::kBenign;  // leaf majority; ties are benign
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  Label Predict(const SparseVector& x) const;
};

struct ForestState {
  std::vector<DecisionTree> trees;
};

struct MlpState {
  std::size_t hidden = 0;
  std::vector<double> input_weights;  // feature-major: [feature * hidden + unit]
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  double output_bias = 0.0;
};

using ModelState = std::variant<LinearState, NaiveBayesState, ForestState, MlpState>;

class TrainedModel {
 public:
  static constexpr int kFormatVersion = 1;

  TrainedModel(ModelSpec spec, ModelState state, std::size_t feature_dimension,
               Fingerprint fingerprint);

  const ModelSpec& spec() const { return spec_; }
  const ModelState& state() const { return state_; }
  std::size_t feature_dimension() const { return feature_dimension_; }
  const Fingerprint& training_fingerprint() const { return fingerprint_; }

  // Scores in [0, 1]; larger means more likely phishing.
  std::vector<double> PredictScores(std::span<const SparseVector> vectors) const;
  // LR/NB/MLP: phishing iff score >= 0.5. SVM: phishing iff margin >= 0.
  // RF: strict majority of tree votes, ties benign.
  std::vector<Label> Predict(std::span<const SparseVector> vectors) const;

  // Naive Bayes only: unnormalized log joint {log P(phishing, x), log P(benign, x)}.
  std::array<double, 2> NaiveBayesLogJoint(const SparseVector& x) const;
  // Linear families only.
  double Margin(const SparseVector& x) const;

  std::string Serialize() const;
  static TrainedModel Deserialize(std::string_view text);
  void Save(const std::filesystem::path& path) const;
  static TrainedModel Load(const std::filesystem::path& path);

 private:
  void CheckDimension(const SparseVector& x) const;
  double Score(const SparseVector& x) const;

  ModelSpec spec_;
  ModelState state_;
  std::size_t feature_dimension_ = 0;
  Fingerprint fingerprint_;
};

// Deterministic given (spec.seed, data order).
TrainedModel Train(const ModelSpec& spec, std::span<const SparseVector> vectors,
                   std::span<const Label> labels, Fingerprint fingerprint = {});

}  // namespace phishbench
