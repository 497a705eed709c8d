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

// log(1 + exp(-m)) without overflow.
double LogisticLoss(double margin) {
  if (margin > 0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

struct LogisticObjective {
  std::span<const SparseVector> x;
  std::span<const Label> y;
  double l2;

  // Mean logistic loss plus l2/2 * |w|^2 (bias unregularized).
  double Value(const std::vector<double>& w, double b) const {
    double loss = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      loss += LogisticLoss(Sign(y[i]) * (Dot(w, x[i]) + b));
    }
    double norm = 0.0;
    for (const double v : w) norm += v * v;
    return loss / static_cast<double>(x.size()) + 0.5 * l2 * norm;
  }

  double Gradient(const std::vector<double>& w, double b, std::vector<double>& grad_w,
                  double& grad_b) const {
    const double n = static_cast<double>(x.size());
    for (size_t j = 0; j < w.size(); ++j) grad_w[j] = l2 * w[j];
    grad_b = 0.0;
    double loss = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      const double s = Sign(y[i]);
      const double m = s * (Dot(w, x[i]) + b);
      loss += LogisticLoss(m);
      const double coeff = -s * Sigmoid(-m) / n;
      for (const auto& e : x[i].entries) grad_w[e.index] += coeff * e.weight;
      grad_b += coeff;
    }
    double norm = 0.0;
    for (const double v : w) norm += v * v;
    return loss / n + 0.5 * l2 * norm;
  }
};

}  // namespace

// Full-batch gradient descent with Armijo backtracking. The step starts at
// twice the last accepted step and halves until sufficient decrease.
LinearState TrainLogisticRegression(const ModelSpec& spec, std::span<const SparseVector> x,
                                    std::span<const Label> y, std::size_t dimension) {
  const double l2 = spec.Get("l2");
  const double tol = spec.Get("tol");
  const int max_epochs = static_cast<int>(spec.Get("max_epochs"));
  const LogisticObjective objective{x, y, l2};

  std::vector<double> w(dimension, 0.0);
  double b = 0.0;
  std::vector<double> grad_w(dimension);
  std::vector<double> trial_w(dimension);
  double grad_b = 0.0;
  double step = 1.0;
  double value = objective.Gradient(w, b, grad_w, grad_b);

  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    double grad_sq = grad_b * grad_b;
    for (const double g : grad_w) grad_sq += g * g;
    if (std::sqrt(grad_sq) < tol) break;

    step = std::min(step * 2.0, 1e6);
    double trial_value = 0.0;
    double trial_b = 0.0;
    while (true) {
      for (size_t j = 0; j < dimension; ++j) trial_w[j] = w[j] - step * grad_w[j];
      trial_b = b - step * grad_b;
      trial_value = objective.Value(trial_w, trial_b);
      if (trial_value <= value - 1e-4 * step * grad_sq || step < 1e-12) break;
      step *= 0.5;
    }
    const double decrease = value - trial_value;
    w.swap(trial_w);
    b = trial_b;
    value = objective.Gradient(w, b, grad_w, grad_b);
    if (decrease <= tol * std::max(1.0, std::abs(value))) break;
  }
  return LinearState{std::move(w), b};
}

// Averaged stochastic subgradient descent on the regularized hinge loss
// (Pegasos step 1/(l2*t)). The bias is an extra constant-one feature.
// The iterate is kept as scale * v so each step costs O(nnz); the running
// sum of iterates is (sum_scale * v - correction).
LinearState TrainLinearSvm(const ModelSpec& spec, std::span<const SparseVector> x,
                           std::span<const Label> y, std::size_t dimension) {
  const double l2 = spec.Get("l2");
  const int epochs = static_cast<int>(spec.Get("epochs"));
  const size_t bias_index = dimension;

  std::vector<double> v(dimension + 1, 0.0);
  std::vector<double> correction(dimension + 1, 0.0);
  double scale = 1.0;
  double sum_scale = 0.0;
  std::uint64_t t = 0;

  std::vector<size_t> order(x.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(spec.seed);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.Shuffle(order);
    for (const size_t i : order) {
      ++t;
      const double eta = 1.0 / (l2 * static_cast<double>(t));
      const double s = Sign(y[i]);
      const double margin = s * scale * (Dot(v, x[i]) + v[bias_index]);
      const double shrink = 1.0 - eta * l2;
      if (shrink <= 0.0) {
        // First step: the iterate collapses to zero.
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double c = eta * s / scale;
        for (const auto& e : x[i].entries) {
          v[e.index] += c * e.weight;
          correction[e.index] += sum_scale * c * e.weight;
        }
        v[bias_index] += c;
        correction[bias_index] += sum_scale * c;
      }
      sum_scale += scale;
      if (scale < 1e-9) {
        for (double& value : v) value *= scale;
        sum_scale /= scale;
        scale = 1.0;
      }
    }
  }
  LinearState state;
  state.weights.resize(dimension);
  const double inv_t = t == 0 ? 0.0 : 1.0 / static_cast<double>(t);
  for (size_t j = 0; j < dimension; ++j) {
    state.weights[j] = (sum_scale * v[j] - correction[j]) * inv_t;
  }
  state.bias = (sum_scale * v[bias_index] - correction[bias_index]) * inv_t;
  return state;
}

}  // namespace phishbench::detail
