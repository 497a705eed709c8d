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

namespace phishbench {

namespace {

double ValueAt(const SparseVector& x, std::uint32_t feature) {
  const auto it = std::lower_bound(
      x.entries.begin(), x.entries.end(), feature,
      [](const SparseEntry& e, std::uint32_t f) { return e.index < f; });
  return (it != x.entries.end() && it->index == feature) ? it->weight : 0.0;
}

}  // namespace

Label DecisionTree::Predict(const SparseVector& x) const {
  std::int32_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& n = nodes[node];
    node = ValueAt(x, static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right;
  }
  return nodes[node].label;
}

namespace detail {

namespace {

struct Split {
  bool found = false;
  double gain = 0.0;
  std::uint32_t feature = 0;
  double threshold = 0.0;
};

struct Candidate {
  double value;
  double phishing;
  double benign;
};

// Grows one CART tree on bootstrap weights with Gini impurity.
//
// Feature subsampling follows the usual random-forest contract: each split
// draws `max_features` features uniformly without replacement; when every
// drawn feature is constant within the node, further batches are drawn until
// a non-constant feature appears or all features have been drawn.
class TreeBuilder {
 public:
  TreeBuilder(std::span<const SparseVector> x, std::span<const Label> y, std::size_t dimension,
              std::vector<double> weights, std::uint64_t seed, std::size_t max_features,
              int max_depth, std::size_t min_samples_split)
      : x_(x),
        y_(y),
        dimension_(dimension),
        weights_(std::move(weights)),
        rng_(seed),
        max_features_(max_features),
        max_depth_(max_depth),
        min_samples_split_(min_samples_split),
        permutation_(dimension),
        slot_(dimension, -1) {
    std::iota(permutation_.begin(), permutation_.end(), std::uint32_t{0});
  }

  DecisionTree Build() {
    std::vector<std::uint32_t> samples;
    for (std::uint32_t i = 0; i < x_.size(); ++i) {
      if (weights_[i] > 0.0) samples.push_back(i);
    }
    Grow(samples, 0);
    return std::move(tree_);
  }

 private:
  std::int32_t Grow(const std::vector<std::uint32_t>& samples, int depth) {
    double phishing = 0.0;
    double benign = 0.0;
    for (const auto s : samples) {
      (y_[s] == Label::kPhishing ? phishing : benign) += weights_[s];
    }
    const auto index = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.push_back({});
    tree_.nodes[index].label = phishing > benign ? Label::kPhishing : Label::kBenign;
    if (depth >= max_depth_ || phishing == 0.0 || benign == 0.0 ||
        samples.size() < min_samples_split_) {
      return index;
    }
    const Split split = FindSplit(samples, phishing, benign);
    if (!split.found) return index;

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    for (const auto s : samples) {
      (ValueAt(x_[s], split.feature) <= split.threshold ? left : right).push_back(s);
    }
    if (left.empty() || right.empty()) return index;
    const std::int32_t left_child = Grow(left, depth + 1);
    const std::int32_t right_child = Grow(right, depth + 1);
    auto& node = tree_.nodes[index];
    node.feature = static_cast<std::int32_t>(split.feature);
    node.threshold = split.threshold;
    node.left = left_child;
    node.right = right_child;
    return index;
  }

  Split FindSplit(const std::vector<std::uint32_t>& samples, double phishing, double benign) {
    const double total = phishing + benign;
    const double parent_score = (phishing * phishing + benign * benign) / total;
    Split best;
    bool any_non_constant = false;
    std::size_t drawn = 0;
    while (drawn < dimension_ && (drawn == 0 || !any_non_constant)) {
      const std::size_t batch = std::min(max_features_, dimension_ - drawn);
      // Partial Fisher-Yates over the persistent permutation.
      for (std::size_t k = 0; k < batch; ++k) {
        const std::size_t i = drawn + k;
        const std::size_t j = i + static_cast<std::size_t>(rng_.Below(dimension_ - i));
        std::swap(permutation_[i], permutation_[j]);
        slot_[permutation_[i]] = static_cast<std::int32_t>(k);
      }
      if (lists_.size() < batch) lists_.resize(batch);
      for (const auto s : samples) {
        for (const auto& e : x_[s].entries) {
          const std::int32_t slot = slot_[e.index];
          if (slot >= 0 && e.weight != 0.0) lists_[slot].push_back({e.weight, s});
        }
      }
      for (std::size_t k = 0; k < batch; ++k) {
        const std::uint32_t feature = permutation_[drawn + k];
        auto& list = lists_[k];
        if (!list.empty()) {
          EvaluateFeature(feature, list, samples.size(), phishing, benign, parent_score,
                          any_non_constant, best);
        }
        list.clear();
        slot_[feature] = -1;
      }
      drawn += batch;
    }
    return best;
  }

  void EvaluateFeature(std::uint32_t feature, const std::vector<std::pair<double, std::uint32_t>>& list,
                       std::size_t node_size, double phishing, double benign, double parent_score,
                       bool& any_non_constant, Split& best) {
    candidates_.clear();
    double nz_phishing = 0.0;
    double nz_benign = 0.0;
    for (const auto& [value, s] : list) {
      const double w = weights_[s];
      if (y_[s] == Label::kPhishing) {
        candidates_.push_back({value, w, 0.0});
        nz_phishing += w;
      } else {
        candidates_.push_back({value, 0.0, w});
        nz_benign += w;
      }
    }
    if (list.size() < node_size) {
      candidates_.push_back({0.0, phishing - nz_phishing, benign - nz_benign});
    }
    std::sort(candidates_.begin(), candidates_.end(),
              [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    if (candidates_.front().value == candidates_.back().value) return;
    any_non_constant = true;

    const double total = phishing + benign;
    double left_p = 0.0;
    double left_b = 0.0;
    for (std::size_t i = 0; i + 1 < candidates_.size(); ++i) {
      left_p += candidates_[i].phishing;
      left_b += candidates_[i].benign;
      const double lo = candidates_[i].value;
      const double hi = candidates_[i + 1].value;
      if (lo == hi) continue;
      const double left_n = left_p + left_b;
      const double right_p = phishing - left_p;
      const double right_b = benign - left_b;
      const double right_n = total - left_n;
      if (left_n <= 0.0 || right_n <= 0.0) continue;
      const double score = (left_p * left_p + left_b * left_b) / left_n +
                           (right_p * right_p + right_b * right_b) / right_n;
      const double gain = score - parent_score;
      if (gain > 1e-12 && (!best.found || gain > best.gain)) {
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = {true, gain, feature, threshold};
      }
    }
  }

  std::span<const SparseVector> x_;
  std::span<const Label> y_;
  std::size_t dimension_;
  std::vector<double> weights_;
  Rng rng_;
  std::size_t max_features_;
  int max_depth_;
  std::size_t min_samples_split_;
  std::vector<std::uint32_t> permutation_;
  std::vector<std::int32_t> slot_;
  std::vector<std::vector<std::pair<double, std::uint32_t>>> lists_;
  std::vector<Candidate> candidates_;
  DecisionTree tree_;
};

}  // namespace

// Tree t uses seed DeriveSeed(spec.seed, t) for both its bootstrap sample and
// its feature draws.
ForestState TrainRandomForest(const ModelSpec& spec, std::span<const SparseVector> x,
                              std::span<const Label> y, std::size_t dimension) {
  const auto n_trees = static_cast<std::size_t>(spec.Get("n_trees"));
  const int max_depth = static_cast<int>(spec.Get("max_depth"));
  const auto min_split = static_cast<std::size_t>(spec.Get("min_samples_split"));
  std::size_t max_features = static_cast<std::size_t>(spec.Get("max_features"));
  if (max_features == 0) {
    max_features = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(dimension))));
  }
  max_features = std::clamp<std::size_t>(max_features, 1, std::max<std::size_t>(dimension, 1));

  ForestState forest;
  forest.trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    const std::uint64_t tree_seed = DeriveSeed(spec.seed, t);
    Rng bootstrap(tree_seed);
    std::vector<double> weights(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) weights[bootstrap.Below(x.size())] += 1.0;
    if (dimension == 0) {
      DecisionTree leaf;
      double p = 0.0;
      double b = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) (y[i] == Label::kPhishing ? p : b) += weights[i];
      leaf.nodes.push_back({});
      leaf.nodes[0].label = p > b ? Label::kPhishing : Label::kBenign;
      forest.trees.push_back(std::move(leaf));
      continue;
    }
    TreeBuilder builder(x, y, dimension, std::move(weights), DeriveSeed(tree_seed, 1), max_features,
                        max_depth, min_split);
    forest.trees.push_back(builder.Build());
  }
  return forest;
}

}  // namespace detail
}  // namespace phishbench
