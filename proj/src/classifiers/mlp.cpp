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

#include "phishbench/rng.hpp"
#include "trainers.hpp"

namespace phishbench::detail {

namespace {

// Hidden pre-activations for one input.
void HiddenLayer(const MlpState& s, const SparseVector& x, std::vector<double>& z) {
  z.assign(s.hidden_bias.begin(), s.hidden_bias.end());
  for (const auto& e : x.entries) {
    const double* row = &s.input_weights[static_cast<std::size_t>(e.index) * s.hidden];
    for (std::size_t k = 0; k < s.hidden; ++k) z[k] += e.weight * row[k];
  }
}

double OutputLogit(const MlpState& s, const std::vector<double>& z) {
  double out = s.output_bias;
  for (std::size_t k = 0; k < s.hidden; ++k) out += s.output_weights[k] * std::max(z[k], 0.0);
  return out;
}

}  // namespace

double MlpOutput(const MlpState& state, const SparseVector& x) {
  std::vector<double> z;
  HiddenLayer(state, x, z);
  return Sigmoid(OutputLogit(state, z));
}

// Mini-batch SGD on binary cross-entropy. Per-example gradients are summed
// over the batch (not averaged) before each fixed-size step.
MlpState TrainMlp(const ModelSpec& spec, std::span<const SparseVector> x, std::span<const Label> y,
                  std::size_t dimension) {
  const auto hidden = static_cast<std::size_t>(spec.Get("hidden"));
  const int epochs = static_cast<int>(spec.Get("epochs"));
  const auto batch = static_cast<std::size_t>(spec.Get("batch"));
  const double step = spec.Get("step");

  Rng rng(spec.seed);
  MlpState s;
  s.hidden = hidden;
  s.input_weights.resize(dimension * hidden);
  const double in_bound = dimension == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(dimension));
  for (double& w : s.input_weights) w = rng.Uniform(-in_bound, in_bound);
  s.hidden_bias.assign(hidden, 0.0);
  s.output_weights.resize(hidden);
  const double out_bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (double& w : s.output_weights) w = rng.Uniform(-out_bound, out_bound);
  s.output_bias = 0.0;

  std::vector<double> grad_input(dimension * hidden, 0.0);
  std::vector<char> touched(dimension, 0);
  std::vector<std::uint32_t> touched_list;
  std::vector<double> grad_hidden_bias(hidden);
  std::vector<double> grad_output(hidden);
  std::vector<double> z(hidden);
  std::vector<double> delta(hidden);

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.Shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(grad_hidden_bias.begin(), grad_hidden_bias.end(), 0.0);
      std::fill(grad_output.begin(), grad_output.end(), 0.0);
      double grad_output_bias = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        HiddenLayer(s, x[i], z);
        const double p = Sigmoid(OutputLogit(s, z));
        const double d_out = p - (y[i] == Label::kPhishing ? 1.0 : 0.0);
        grad_output_bias += d_out;
        for (std::size_t k = 0; k < hidden; ++k) {
          const double a = std::max(z[k], 0.0);
          grad_output[k] += d_out * a;
          delta[k] = z[k] > 0.0 ? d_out * s.output_weights[k] : 0.0;
          grad_hidden_bias[k] += delta[k];
        }
        for (const auto& e : x[i].entries) {
          if (!touched[e.index]) {
            touched[e.index] = 1;
            touched_list.push_back(e.index);
          }
          double* g = &grad_input[static_cast<std::size_t>(e.index) * hidden];
          for (std::size_t k = 0; k < hidden; ++k) g[k] += e.weight * delta[k];
        }
      }
      for (const auto j : touched_list) {
        double* w = &s.input_weights[static_cast<std::size_t>(j) * hidden];
        double* g = &grad_input[static_cast<std::size_t>(j) * hidden];
        for (std::size_t k = 0; k < hidden; ++k) {
          w[k] -= step * g[k];
          g[k] = 0.0;
        }
        touched[j] = 0;
      }
      touched_list.clear();
      for (std::size_t k = 0; k < hidden; ++k) {
        s.hidden_bias[k] -= step * grad_hidden_bias[k];
        s.output_weights[k] -= step * grad_output[k];
      }
      s.output_bias -= step * grad_output_bias;
    }
  }
  return s;
}

}  // namespace phishbench::detail
