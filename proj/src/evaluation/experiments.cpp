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

#include <set>

#include "phishbench/evaluation.hpp"
#include "phishbench/pool.hpp"
#include "phishbench/rng.hpp"

namespace phishbench {

namespace {

struct TestTarget {
  std::size_t dataset;
  const char* group;
};

struct TrainJob {
  std::vector<std::size_t> train_datasets;
  std::size_t seed_index = 0;
  std::vector<TestTarget> tests;
};

struct JobOutput {
  bool done = false;
  std::vector<MetricsReport> runs;
  std::vector<CellError> errors;
};

using Splits = std::vector<std::vector<SplitPlan>>;  // [dataset][seed index]

std::string JoinNames(const std::vector<DatasetInput>& datasets, const std::vector<std::size_t>& which) {
  std::string out;
  for (const auto d : which) {
    if (!out.empty()) out += '+';
    out += datasets[d].name;
  }
  return out;
}

void Subset(const Corpus& corpus, const std::vector<std::size_t>& indices, Corpus& records) {
  for (const auto i : indices) records.push_back(corpus[i]);
}

std::vector<std::string> Ids(const Corpus& records) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.id);
  return ids;
}

std::vector<Label> Labels(const Corpus& records) {
  std::vector<Label> labels;
  labels.reserve(records.size());
  for (const auto& r : records) labels.push_back(r.label);
  return labels;
}

JobOutput RunJob(const TrainJob& job, const std::vector<DatasetInput>& datasets, const Splits& splits,
                 const ExperimentOptions& options) {
  JobOutput out;
  const std::uint64_t seed = options.seeds[job.seed_index];
  const std::string train_source = JoinNames(datasets, job.train_datasets);
  auto fail = [&](const std::string& model_id, const std::string& message) {
    for (const auto& t : job.tests) {
      out.errors.push_back({model_id, train_source, datasets[t.dataset].name, seed, message});
    }
  };

  Corpus train;
  std::vector<std::string> sources;
  for (const auto d : job.train_datasets) {
    Subset(datasets[d].corpus, splits[d][job.seed_index].train, train);
    sources.push_back(datasets[d].name);
  }
  const Fingerprint fingerprint{sources, seed};

  struct TestSet {
    std::vector<SparseVector> x;
    std::vector<Label> y;
  };
  TfidfModel tfidf;
  std::vector<SparseVector> x_train;
  std::vector<TestSet> tests;
  try {
    tfidf = FitTfidf(train, options.tfidf, fingerprint);
    x_train = tfidf.TransformAll(train);
    const auto train_ids = Ids(train);
    for (const auto& t : job.tests) {
      Corpus test;
      Subset(datasets[t.dataset].corpus, splits[t.dataset][job.seed_index].test, test);
      AssertNoLeak(train_ids, Ids(test), train_source + " -> " + datasets[t.dataset].name);
      tests.push_back({tfidf.TransformAll(test), Labels(test)});
    }
  } catch (const std::exception& e) {
    for (const auto& m : options.models) fail(FamilyName(m.family), e.what());
    out.done = true;
    return out;
  }
  const auto y_train = Labels(train);

  for (const auto& choice : options.models) {
    const std::string model_id = FamilyName(choice.family);
    try {
      const auto spec = ModelSpec::Make(
          choice.family, DeriveSeed(seed, HashName(train_source + "/" + model_id)), choice.overrides);
      const auto model = Train(spec, x_train, y_train, fingerprint);
      for (std::size_t k = 0; k < job.tests.size(); ++k) {
        auto m = ComputeMetrics(model.Predict(tests[k].x), tests[k].y);
        m.seed = seed;
        m.model_id = model_id;
        m.train_source = train_source;
        m.test_source = datasets[job.tests[k].dataset].name;
        m.group = job.tests[k].group;
        out.runs.push_back(std::move(m));
      }
    } catch (const std::exception& e) {
      fail(model_id, e.what());
    }
  }
  out.done = true;
  return out;
}

void CheckInputs(const std::vector<DatasetInput>& datasets, const ExperimentOptions& options,
                 std::size_t min_datasets) {
  Require(datasets.size() >= min_datasets, ErrorKind::kValidation,
          "need at least " + std::to_string(min_datasets) + " datasets");
  Require(!options.models.empty(), ErrorKind::kValidation, "no models selected");
  Require(!options.seeds.empty(), ErrorKind::kValidation, "no seeds selected");
  std::set<std::string> names;
  for (const auto& d : datasets) {
    Require(!d.name.empty() && d.name.find('+') == std::string::npos, ErrorKind::kValidation,
            "invalid dataset name '" + d.name + "'");
    Require(names.insert(d.name).second, ErrorKind::kValidation, "dataset '" + d.name + "' listed twice");
  }
  std::set<ModelFamily> families;
  for (const auto& m : options.models) {
    Require(families.insert(m.family).second, ErrorKind::kValidation,
            std::string("model '") + FamilyName(m.family) + "' listed twice");
    ModelSpec::Make(m.family, 0, m.overrides);
  }
  options.tfidf.Validate();
}

Splits MakeSplits(const std::vector<DatasetInput>& datasets, const ExperimentOptions& options) {
  Splits splits(datasets.size());
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (const auto seed : options.seeds) {
      try {
        splits[d].push_back(StratifiedSplit(datasets[d].corpus, options.train_ratio, seed));
      } catch (const Error& e) {
        Fail(e.kind(), "dataset '" + datasets[d].name + "': " + e.what());
      }
    }
  }
  return splits;
}

ResultSet Execute(std::string experiment, const std::vector<DatasetInput>& datasets,
                  const ExperimentOptions& options, const std::vector<TrainJob>& jobs, const Splits& splits) {
  ResultSet results;
  results.experiment = std::move(experiment);
  for (const auto& d : datasets) results.datasets.push_back(d.name);
  for (const auto& m : options.models) results.models.push_back(FamilyName(m.family));
  results.seeds = options.seeds;
  results.train_ratio = options.train_ratio;

  std::vector<JobOutput> outputs(jobs.size());
  ParallelFor(
      jobs.size(), options.jobs,
      [&](std::size_t i) { outputs[i] = RunJob(jobs[i], datasets, splits, options); }, options.cancel);
  for (auto& o : outputs) {
    if (!o.done) {
      results.partial = true;
      continue;
    }
    for (auto& r : o.runs) results.runs.push_back(std::move(r));
    for (auto& e : o.errors) results.errors.push_back(std::move(e));
  }
  if (results.partial) results.notes.push_back("cancelled: results are partial");
  return results;
}

}  // namespace

ResultSet RunExperiment1(const std::vector<DatasetInput>& datasets, const ExperimentOptions& options) {
  CheckInputs(datasets, options, 1);
  const auto splits = MakeSplits(datasets, options);
  std::vector<TrainJob> jobs;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (std::size_t s = 0; s < options.seeds.size(); ++s) {
      TrainJob job{{d}, s, {}};
      for (std::size_t t = 0; t < datasets.size(); ++t) job.tests.push_back({t, "cross"});
      jobs.push_back(std::move(job));
    }
  }
  return Execute("cross-eval", datasets, options, jobs, splits);
}

ResultSet RunExperiment2(const std::vector<DatasetInput>& datasets, const ExperimentOptions& options,
                         const std::vector<std::string>& holdouts) {
  CheckInputs(datasets, options, 2);
  std::vector<std::size_t> held;
  if (holdouts.empty()) {
    for (std::size_t d = 0; d < datasets.size(); ++d) held.push_back(d);
  } else {
    for (const auto& name : holdouts) {
      std::size_t d = 0;
      while (d < datasets.size() && datasets[d].name != name) ++d;
      Require(d < datasets.size(), ErrorKind::kValidation,
              "holdout '" + name + "' is not among the datasets");
      held.push_back(d);
    }
  }
  const auto splits = MakeSplits(datasets, options);
  std::vector<TrainJob> jobs;
  for (const auto h : held) {
    for (std::size_t s = 0; s < options.seeds.size(); ++s) {
      TrainJob job;
      job.seed_index = s;
      for (std::size_t d = 0; d < datasets.size(); ++d) {
        if (d != h) job.train_datasets.push_back(d);
      }
      job.tests.push_back({h, "holdout"});
      for (const auto d : job.train_datasets) job.tests.push_back({d, "constituent"});
      jobs.push_back(std::move(job));
    }
  }
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (std::size_t s = 0; s < options.seeds.size(); ++s) jobs.push_back({{d}, s, {{d, "single"}}});
  }
  return Execute("all-vs-one", datasets, options, jobs, splits);
}

}  // namespace phishbench
