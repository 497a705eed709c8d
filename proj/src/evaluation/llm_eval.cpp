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

#include <numeric>

#include "phishbench/evaluation.hpp"
#include "phishbench/pool.hpp"

namespace phishbench {

MetricsReport EvaluateLlm(LlmClient& client, const Corpus& corpus, std::string_view test_source,
                          const LlmEvalOptions& options, std::vector<DetectionVerdict>* verdicts) {
  Require(!corpus.empty(), ErrorKind::kValidation, "empty corpus");
  std::vector<std::size_t> indices;
  if (options.sample) {
    indices = SampleIndices(corpus.size(), *options.sample, options.sample_seed);
  } else {
    indices.resize(corpus.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
  }
  std::vector<DetectionVerdict> out(indices.size());
  std::vector<char> done(indices.size(), 0);
  const std::size_t jobs = client.order_sensitive() ? 1 : options.jobs;
  ParallelFor(
      indices.size(), jobs,
      [&](std::size_t i) {
        out[i] = ClassifyEmail(client, corpus[indices[i]]);
        done[i] = 1;
      },
      options.cancel);

  std::vector<Verdict> predicted;
  std::vector<Label> gold;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (!done[i]) continue;
    predicted.push_back(out[i].label);
    gold.push_back(corpus[indices[i]].label);
  }
  Require(!gold.empty(), ErrorKind::kRuntime, "cancelled before any record was classified");
  auto m = ComputeMetrics(predicted, gold);
  m.model_id = client.config().provider_id;
  m.test_source = std::string(test_source);
  m.group = "llm";
  m.seed = options.sample ? options.sample_seed : 0;
  if (verdicts) *verdicts = std::move(out);
  return m;
}

ResultSet RunExperiment3(const Corpus& corpus, std::string_view test_source,
                         const std::vector<ProviderConfig>& providers, const LlmEvalOptions& options) {
  Require(!corpus.empty(), ErrorKind::kValidation, "empty corpus");
  Require(!providers.empty(), ErrorKind::kValidation, "no providers selected");
  ResultSet results;
  results.experiment = "llm-eval";
  results.datasets = {std::string(test_source)};
  results.seeds = {options.sample ? options.sample_seed : 0};
  if (options.sample) {
    results.notes.push_back("sampled " + std::to_string(*options.sample) + " of " +
                            std::to_string(corpus.size()) + " records with seed " +
                            std::to_string(options.sample_seed));
  }
  results.notes.push_back("detection prompt version " + DetectionPromptVersion());
  for (const auto& provider : providers) {
    results.models.push_back(provider.provider_id);
    std::unique_ptr<LlmClient> client;
    try {
      client = LlmClient::Create(provider, options.log);
    } catch (const Error& e) {
      results.notes.push_back("skipped provider " + provider.provider_id + ": " + e.what());
      results.errors.push_back({provider.provider_id, "", std::string(test_source), results.seeds[0], e.what()});
      continue;
    }
    if (options.cancel && options.cancel->load()) {
      results.partial = true;
      break;
    }
    results.runs.push_back(EvaluateLlm(*client, corpus, test_source, options));
    if (options.cancel && options.cancel->load()) results.partial = true;
  }
  if (results.partial) results.notes.push_back("cancelled: results are partial");
  return results;
}

}  // namespace phishbench
