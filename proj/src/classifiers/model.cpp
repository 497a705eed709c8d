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

#include "json.hpp"

#include "../encoding.hpp"
#include "phishbench/error.hpp"
#include "trainers.hpp"

namespace phishbench {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kModelMagic = "phishbench-model";

struct ParamRule {
  const char* key;
  double def;
  double min;
  bool exclusive_min;
  bool integer;
};

const std::vector<ParamRule>& Rules(ModelFamily family) {
  static const std::vector<ParamRule> lr = {
      {"l2", 1e-4, 0.0, false, false},
      {"tol", 1e-6, 0.0, true, false},
      {"max_epochs", 1000, 1, false, true}};
  static const std::vector<ParamRule> nb = {{"alpha", 1.0, 0.0, true, false}};
  static const std::vector<ParamRule> rf = {
      {"n_trees", 100, 1, false, true},
      {"max_depth", 40, 1, false, true},
      {"max_features", 0, 0, false, true},
      {"min_samples_split", 2, 2, false, true}};
  static const std::vector<ParamRule> svm = {
      {"l2", 1e-4, 0.0, true, false},
      {"epochs", 10, 1, false, true}};
  static const std::vector<ParamRule> mlp = {
      {"hidden", 100, 1, false, true},
      {"epochs", 20, 1, false, true},
      {"batch", 64, 1, false, true},
      {"step", 0.01, 0.0, true, false}};
  switch (family) {
    case ModelFamily::kLR: return lr;
    case ModelFamily::kNB: return nb;
    case ModelFamily::kRF: return rf;
    case ModelFamily::kSVM: return svm;
    case ModelFamily::kMLP: return mlp;
  }
  return lr;
}

}  // namespace

const char* FamilyName(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLR: return "lr";
    case ModelFamily::kNB: return "nb";
    case ModelFamily::kRF: return "rf";
    case ModelFamily::kSVM: return "svm";
    case ModelFamily::kMLP: return "mlp";
  }
  return "?";
}

ModelFamily ParseFamily(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto f : AllFamilies()) {
    if (lower == FamilyName(f)) return f;
  }
  Fail(ErrorKind::kValidation, "unknown model family '" + std::string(name) + "'");
}

const std::vector<ModelFamily>& AllFamilies() {
  static const std::vector<ModelFamily> all = {ModelFamily::kLR, ModelFamily::kNB,
                                               ModelFamily::kRF, ModelFamily::kSVM,
                                               ModelFamily::kMLP};
  return all;
}

Hyperparameters DefaultHyperparameters(ModelFamily family) {
  Hyperparameters h;
  for (const auto& r : Rules(family)) h[r.key] = r.def;
  return h;
}

ModelSpec ModelSpec::Make(ModelFamily family, std::uint64_t seed, const Hyperparameters& overrides) {
  ModelSpec spec;
  spec.family = family;
  spec.seed = seed;
  spec.hyperparameters = DefaultHyperparameters(family);
  for (const auto& [k, v] : overrides) spec.hyperparameters[k] = v;
  spec.Validate();
  return spec;
}

void ModelSpec::Validate() const {
  const auto& rules = Rules(family);
  for (const auto& [key, value] : hyperparameters) {
    const auto it = std::find_if(rules.begin(), rules.end(),
                                 [&](const ParamRule& r) { return key == r.key; });
    Require(it != rules.end(), ErrorKind::kValidation,
            std::string("unknown hyperparameter '") + key + "' for " + FamilyName(family));
    Require(std::isfinite(value), ErrorKind::kValidation, "hyperparameter " + key + " is not finite");
    const bool ok = it->exclusive_min ? value > it->min : value >= it->min;
    Require(ok, ErrorKind::kValidation,
            "hyperparameter " + key + " out of range for " + FamilyName(family));
    Require(!it->integer || value == std::floor(value), ErrorKind::kValidation,
            "hyperparameter " + key + " must be an integer");
  }
  for (const auto& r : rules) {
    Require(hyperparameters.count(r.key) == 1, ErrorKind::kValidation,
            std::string("missing hyperparameter '") + r.key + "'");
  }
}

double ModelSpec::Get(const std::string& key) const {
  const auto it = hyperparameters.find(key);
  Require(it != hyperparameters.end(), ErrorKind::kValidation,
          "missing hyperparameter '" + key + "'");
  return it->second;
}

TrainedModel::TrainedModel(ModelSpec spec, ModelState state, std::size_t feature_dimension,
                           Fingerprint fingerprint)
    : spec_(std::move(spec)),
      state_(std::move(state)),
      feature_dimension_(feature_dimension),
      fingerprint_(std::move(fingerprint)) {}

void TrainedModel::CheckDimension(const SparseVector& x) const {
  Require(x.dimension == feature_dimension_, ErrorKind::kValidation,
          "feature dimension mismatch: model expects " + std::to_string(feature_dimension_) +
              ", vector has " + std::to_string(x.dimension));
  for (const auto& e : x.entries) {
    Require(e.index < feature_dimension_, ErrorKind::kValidation, "feature index out of range");
  }
}

std::array<double, 2> TrainedModel::NaiveBayesLogJoint(const SparseVector& x) const {
  const auto* nb = std::get_if<NaiveBayesState>(&state_);
  Require(nb != nullptr, ErrorKind::kValidation, "not a naive Bayes model");
  CheckDimension(x);
  std::array<double, 2> out = nb->log_prior;
  for (int c = 0; c < 2; ++c) {
    for (const auto& e : x.entries) out[c] += e.weight * nb->log_likelihood[c][e.index];
  }
  return out;
}

double TrainedModel::Margin(const SparseVector& x) const {
  const auto* lin = std::get_if<LinearState>(&state_);
  Require(lin != nullptr, ErrorKind::kValidation, "not a linear model");
  CheckDimension(x);
  return detail::Dot(lin->weights, x) + lin->bias;
}

double TrainedModel::Score(const SparseVector& x) const {
  CheckDimension(x);
  switch (spec_.family) {
    case ModelFamily::kLR:
    case ModelFamily::kSVM:
      return detail::Sigmoid(Margin(x));
    case ModelFamily::kNB: {
      const auto lj = NaiveBayesLogJoint(x);
      return detail::Sigmoid(lj[0] - lj[1]);
    }
    case ModelFamily::kRF: {
      const auto& forest = std::get<ForestState>(state_);
      std::size_t votes = 0;
      for (const auto& t : forest.trees) votes += t.Predict(x) == Label::kPhishing ? 1 : 0;
      return forest.trees.empty() ? 0.0
                                  : static_cast<double>(votes) / static_cast<double>(forest.trees.size());
    }
    case ModelFamily::kMLP:
      return detail::MlpOutput(std::get<MlpState>(state_), x);
  }
  return 0.0;
}

std::vector<double> TrainedModel::PredictScores(std::span<const SparseVector> vectors) const {
  std::vector<double> out;
  out.reserve(vectors.size());
  for (const auto& x : vectors) out.push_back(Score(x));
  return out;
}

std::vector<Label> TrainedModel::Predict(std::span<const SparseVector> vectors) const {
  std::vector<Label> out;
  out.reserve(vectors.size());
  for (const auto& x : vectors) {
    bool phishing = false;
    switch (spec_.family) {
      case ModelFamily::kSVM:
        phishing = Margin(x) >= 0.0;
        break;
      case ModelFamily::kRF: {
        CheckDimension(x);
        const auto& forest = std::get<ForestState>(state_);
        std::size_t votes = 0;
        for (const auto& t : forest.trees) votes += t.Predict(x) == Label::kPhishing ? 1 : 0;
        phishing = 2 * votes > forest.trees.size();
        break;
      }
      default:
        phishing = Score(x) >= 0.5;
    }
    out.push_back(phishing ? Label::kPhishing : Label::kBenign);
  }
  return out;
}

namespace {

json StateToJson(const ModelState& state) {
  using encoding::EncodeDoubles;
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        json j;
        if constexpr (std::is_same_v<T, LinearState>) {
          j["weights"] = EncodeDoubles(s.weights);
          j["bias"] = EncodeDoubles({s.bias});
        } else if constexpr (std::is_same_v<T, NaiveBayesState>) {
          j["log_prior"] = EncodeDoubles({s.log_prior[0], s.log_prior[1]});
          j["log_likelihood_phishing"] = EncodeDoubles(s.log_likelihood[0]);
          j["log_likelihood_benign"] = EncodeDoubles(s.log_likelihood[1]);
        } else if constexpr (std::is_same_v<T, ForestState>) {
          // Each node as five doubles: feature, threshold, left, right, label.
          j["trees"] = json::array();
          for (const auto& tree : s.trees) {
            std::vector<double> flat;
            flat.reserve(tree.nodes.size() * 5);
            for (const auto& n : tree.nodes) {
              flat.insert(flat.end(), {static_cast<double>(n.feature), n.threshold,
                                       static_cast<double>(n.left), static_cast<double>(n.right),
                                       n.label == Label::kPhishing ? 1.0 : 0.0});
            }
            j["trees"].push_back(EncodeDoubles(flat));
          }
        } else {
          j["hidden"] = s.hidden;
          j["input_weights"] = EncodeDoubles(s.input_weights);
          j["hidden_bias"] = EncodeDoubles(s.hidden_bias);
          j["output_weights"] = EncodeDoubles(s.output_weights);
          j["output_bias"] = EncodeDoubles({s.output_bias});
        }
        return j;
      },
      state);
}

double Scalar(const json& j) {
  const auto v = encoding::DecodeDoubles(j.get<std::string>());
  Require(v.size() == 1, ErrorKind::kValidation, "expected a single encoded value");
  return v[0];
}

ModelState StateFromJson(ModelFamily family, const json& j, std::size_t dimension) {
  using encoding::DecodeDoubles;
  const auto sized = [&](std::vector<double> v, std::size_t n, const char* what) {
    Require(v.size() == n, ErrorKind::kValidation, std::string("model state '") + what +
                                                       "' has the wrong length");
    return v;
  };
  switch (family) {
    case ModelFamily::kLR:
    case ModelFamily::kSVM:
      return LinearState{sized(DecodeDoubles(j.at("weights").get<std::string>()), dimension, "weights"),
                         Scalar(j.at("bias"))};
    case ModelFamily::kNB: {
      NaiveBayesState s;
      const auto prior = sized(DecodeDoubles(j.at("log_prior").get<std::string>()), 2, "log_prior");
      s.log_prior = {prior[0], prior[1]};
      s.log_likelihood[0] = sized(DecodeDoubles(j.at("log_likelihood_phishing").get<std::string>()),
                                  dimension, "log_likelihood_phishing");
      s.log_likelihood[1] = sized(DecodeDoubles(j.at("log_likelihood_benign").get<std::string>()),
                                  dimension, "log_likelihood_benign");
      return s;
    }
    case ModelFamily::kRF: {
      ForestState s;
      for (const auto& t : j.at("trees")) {
        const auto flat = DecodeDoubles(t.get<std::string>());
        Require(!flat.empty() && flat.size() % 5 == 0, ErrorKind::kValidation, "malformed tree");
        DecisionTree tree;
        const auto n = static_cast<std::int32_t>(flat.size() / 5);
        for (std::int32_t i = 0; i < n; ++i) {
          TreeNode node;
          node.feature = static_cast<std::int32_t>(flat[i * 5]);
          node.threshold = flat[i * 5 + 1];
          node.left = static_cast<std::int32_t>(flat[i * 5 + 2]);
          node.right = static_cast<std::int32_t>(flat[i * 5 + 3]);
          node.label = flat[i * 5 + 4] == 1.0 ? Label::kPhishing : Label::kBenign;
          if (node.feature >= 0) {
            Require(static_cast<std::size_t>(node.feature) < dimension && node.left > i &&
                        node.left < n && node.right > i && node.right < n,
                    ErrorKind::kValidation, "malformed tree node");
          }
          tree.nodes.push_back(node);
        }
        s.trees.push_back(std::move(tree));
      }
      return s;
    }
    case ModelFamily::kMLP: {
      MlpState s;
      s.hidden = j.at("hidden").get<std::size_t>();
      s.input_weights = sized(DecodeDoubles(j.at("input_weights").get<std::string>()),
                              dimension * s.hidden, "input_weights");
      s.hidden_bias = sized(DecodeDoubles(j.at("hidden_bias").get<std::string>()), s.hidden,
                            "hidden_bias");
      s.output_weights = sized(DecodeDoubles(j.at("output_weights").get<std::string>()), s.hidden,
                               "output_weights");
      s.output_bias = Scalar(j.at("output_bias"));
      return s;
    }
  }
  Fail(ErrorKind::kValidation, "unknown model family");
}

}  // namespace

std::string TrainedModel::Serialize() const {
  json j;
  j["format"] = kModelMagic;
  j["version"] = kFormatVersion;
  j["family"] = FamilyName(spec_.family);
  j["hyperparameters"] = json::object();
  for (const auto& [k, v] : spec_.hyperparameters) j["hyperparameters"][k] = v;
  j["seed"] = spec_.seed;
  j["feature_dimension"] = feature_dimension_;
  j["training_fingerprint"] = {{"datasets", fingerprint_.datasets}, {"seed", fingerprint_.seed}};
  j["state"] = StateToJson(state_);
  return j.dump() + "\n";
}

TrainedModel TrainedModel::Deserialize(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorKind::kValidation, std::string("malformed model file: ") + e.what());
  }
  try {
    Require(j.value("format", "") == kModelMagic, ErrorKind::kValidation,
            "not a phishbench model file");
    const int version = j.at("version").get<int>();
    Require(version == kFormatVersion, ErrorKind::kValidation,
            "model format version " + std::to_string(version) + " is not supported (expected " +
                std::to_string(kFormatVersion) + ")");
    ModelSpec spec;
    spec.family = ParseFamily(j.at("family").get<std::string>());
    for (const auto& [k, v] : j.at("hyperparameters").items()) spec.hyperparameters[k] = v.get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.Validate();
    const auto dimension = j.at("feature_dimension").get<std::size_t>();
    Fingerprint fp;
    fp.datasets = j.at("training_fingerprint").at("datasets").get<std::vector<std::string>>();
    fp.seed = j.at("training_fingerprint").at("seed").get<std::uint64_t>();
    ModelState state = StateFromJson(spec.family, j.at("state"), dimension);
    return TrainedModel(std::move(spec), std::move(state), dimension, std::move(fp));
  } catch (const json::exception& e) {
    Fail(ErrorKind::kValidation, std::string("malformed model file: ") + e.what());
  }
}

void TrainedModel::Save(const std::filesystem::path& path) const {
  WriteFileAtomic(path, Serialize());
}

TrainedModel TrainedModel::Load(const std::filesystem::path& path) {
  return Deserialize(ReadFile(path));
}

TrainedModel Train(const ModelSpec& spec, std::span<const SparseVector> vectors,
                   std::span<const Label> labels, Fingerprint fingerprint) {
  spec.Validate();
  Require(vectors.size() == labels.size(), ErrorKind::kValidation,
          "vectors and labels differ in length");
  Require(vectors.size() >= 2, ErrorKind::kValidation, "training needs at least 2 samples");
  const std::size_t dimension = vectors.front().dimension;
  bool has_phishing = false;
  bool has_benign = false;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Require(vectors[i].dimension == dimension, ErrorKind::kValidation,
            "training vectors have mismatched dimensions");
    (labels[i] == Label::kPhishing ? has_phishing : has_benign) = true;
  }
  Require(has_phishing && has_benign, ErrorKind::kValidation,
          "training set must contain both classes");

  ModelState state;
  switch (spec.family) {
    case ModelFamily::kLR:
      state = detail::TrainLogisticRegression(spec, vectors, labels, dimension);
      break;
    case ModelFamily::kNB:
      state = detail::TrainNaiveBayes(spec, vectors, labels, dimension);
      break;
    case ModelFamily::kRF:
      state = detail::TrainRandomForest(spec, vectors, labels, dimension);
      break;
    case ModelFamily::kSVM:
      state = detail::TrainLinearSvm(spec, vectors, labels, dimension);
      break;
    case ModelFamily::kMLP:
      state = detail::TrainMlp(spec, vectors, labels, dimension);
      break;
  }
  return TrainedModel(spec, std::move(state), dimension, std::move(fingerprint));
}

}  // namespace phishbench
