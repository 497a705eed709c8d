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

#include "phishbench/error.hpp"
#include "trainers.hpp"

namespace phishbench::detail {

// Multinomial NB over nonnegative feature weights used as pseudo-counts:
//   log theta[c][j] = log(N[c][j] + alpha) - log(N[c] + alpha * d)
//   log prior[c]    = log(n_c / n)
NaiveBayesState TrainNaiveBayes(const ModelSpec& spec, std::span<const SparseVector> x,
                                std::span<const Label> y, std::size_t dimension) {
  const double alpha = spec.Get("alpha");
  std::array<std::vector<double>, 2> counts = {std::vector<double>(dimension, 0.0),
                                               std::vector<double>(dimension, 0.0)};
  std::array<double, 2> docs{0.0, 0.0};
  for (size_t i = 0; i < x.size(); ++i) {
    const int c = y[i] == Label::kPhishing ? 0 : 1;
    docs[c] += 1.0;
    for (const auto& e : x[i].entries) {
      Require(e.weight >= 0.0, ErrorKind::kValidation,
              "naive Bayes needs nonnegative feature weights");
      counts[c][e.index] += e.weight;
    }
  }
  NaiveBayesState state;
  const double n = docs[0] + docs[1];
  for (int c = 0; c < 2; ++c) {
    state.log_prior[c] = std::log(docs[c] / n);
    double total = 0.0;
    for (const double v : counts[c]) total += v;
    const double denom = std::log(total + alpha * static_cast<double>(dimension));
    state.log_likelihood[c].resize(dimension);
    for (size_t j = 0; j < dimension; ++j) {
      state.log_likelihood[c][j] = std::log(counts[c][j] + alpha) - denom;
    }
  }
  return state;
}

}  // namespace phishbench::detail
