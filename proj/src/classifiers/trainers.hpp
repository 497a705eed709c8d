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

#include <cmath>
#include <span>
#include <vector>

#include "phishbench/classifiers.hpp"

namespace phishbench::detail {

inline double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double Dot(const std::vector<double>& w, const SparseVector& x) {
  double s = 0.0;
  for (const auto& e : x.entries) s += w[e.index] * e.weight;
  return s;
}

// +1 for phishing, -1 for benign.
inline double Sign(Label label) { return label == Label::kPhishing ? 1.0 : -1.0; }

LinearState TrainLogisticRegression(const ModelSpec& spec, std::span<const SparseVector> x,
                                    std::span<const Label> y, std::size_t dimension);
LinearState TrainLinearSvm(const ModelSpec& spec, std::span<const SparseVector> x,
                           std::span<const Label> y, std::size_t dimension);
NaiveBayesState TrainNaiveBayes(const ModelSpec& spec, std::span<const SparseVector> x,
                                std::span<const Label> y, std::size_t dimension);
ForestState TrainRandomForest(const ModelSpec& spec, std::span<const SparseVector> x,
                              std::span<const Label> y, std::size_t dimension);
MlpState TrainMlp(const ModelSpec& spec, std::span<const SparseVector> x, std::span<const Label> y,
                  std::size_t dimension);

double MlpOutput(const MlpState& state, const SparseVector& x);

}  // namespace phishbench::detail
