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
#include <charconv>
#include <set>

#include "json.hpp"
#include "phishbench/app.hpp"
#include "phishbench/corpus.hpp"
#include "phishbench/digest.hpp"
#include "phishbench/evaluation.hpp"
#include "phishbench/generator.hpp"
#include "phishbench/llm.hpp"

namespace phishbench {

using nlohmann::ordered_json;

namespace {

namespace fs = std::filesystem;

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    auto end = value.find(',', pos);
    if (end == std::string::npos) end = value.size();
    auto item = value.substr(pos, end - pos);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    pos = end + 1;
  }
  return out;
}

// Typed access to resolved settings for one command.
class Args {
 public:
  Args(std::string command, const Settings& settings) : command_(std::move(command)), settings_(settings) {}

  bool Has(const std::string& key) const { return settings_.count(key) > 0; }

  const std::string& Str(const std::string& key) const {
    const auto it = settings_.find(key);
    Require(it != settings_.end(), ErrorKind::kUsage, command_ + ": missing required '--" + key + "'");
    return it->second;
  }

  std::uint64_t Uint(const std::string& key) const {
    const auto& s = Str(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    Require(ec == std::errc() && ptr == s.data() + s.size(), ErrorKind::kValidation,
            "'" + key + "' must be a non-negative integer, got '" + s + "'");
    return v;
  }

  double Real(const std::string& key) const {
    const auto& s = Str(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    Require(used == s.size() && !s.empty(), ErrorKind::kValidation, "'" + key + "' must be a number, got '" + s + "'");
    return v;
  }

  std::vector<std::string> List(const std::string& key) const {
    auto items = SplitList(Str(key));
    Require(!items.empty(), ErrorKind::kValidation, "'" + key + "' is empty");
    return items;
  }

  std::vector<std::uint64_t> Seeds() const {
    std::vector<std::uint64_t> out;
    for (const auto& s : List("seeds")) {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      Require(ec == std::errc() && ptr == s.data() + s.size(), ErrorKind::kValidation, "invalid seed '" + s + "'");
      out.push_back(v);
    }
    return out;
  }

  std::size_t Jobs() const {
    const auto jobs = Uint("jobs");
    Require(jobs >= 1, ErrorKind::kValidation, "'jobs' must be at least 1");
    return static_cast<std::size_t>(jobs);
  }

  fs::path Path(const std::string& key) const { return fs::path(Str(key)); }

  fs::path Input(const std::string& key) const {
    auto p = Path(key);
    Require(fs::exists(p), ErrorKind::kValidation, "'" + key + "': " + p.string() + " does not exist");
    return p;
  }

 private:
  std::string command_;
  const Settings& settings_;
};

// Manifest and snapshot for one run.
class Run {
 public:
  Run(std::string command, const Settings& settings, bool dir_output)
      : command_(std::move(command)), settings_(settings), dir_output_(dir_output) {
    const auto it = settings.find("out");
    Require(it != settings.end(), ErrorKind::kUsage, command_ + ": missing required '--out'");
    out_ = it->second;
    if (dir_output_) {
      Require(!fs::exists(out_) || fs::is_directory(out_), ErrorKind::kValidation,
              "'out' must be a directory: " + out_.string());
    } else {
      Require(!fs::is_directory(out_), ErrorKind::kValidation, "'out' must be a file path: " + out_.string());
    }
  }

  const fs::path& out() const { return out_; }
  // Sidecar beside a file output or inside a directory output.
  fs::path Sidecar(const std::string& suffix, const std::string& dir_name) const {
    if (dir_output_) return out_ / dir_name;
    return out_.parent_path() / (out_.stem().string() + suffix);
  }

  void Input(const fs::path& path) {
    if (!fs::is_regular_file(path)) return;
    inputs_.push_back({{"path", path.string()}, {"sha256", Sha256Hex(ReadFile(path))}});
  }
  void Output(const fs::path& path) { outputs_.push_back(path.lexically_relative(Base()).string()); }
  ordered_json& extra() { return extra_; }

  void Finish(std::string_view status) {
    if (dir_output_) fs::create_directories(out_);
    else if (out_.has_parent_path()) fs::create_directories(out_.parent_path());
    Settings snapshot = settings_;
    snapshot["command"] = command_;
    const auto snapshot_path = Sidecar(".config", "config.snapshot");
    WriteFileAtomic(snapshot_path, SettingsToText(snapshot));
    ordered_json m;
    m["format"] = "phishbench-manifest";
    m["version"] = 1;
    m["tool_version"] = kToolVersion;
    m["command"] = command_;
    m["status"] = status;
    m["config"] = settings_;
    m["config_snapshot"] = snapshot_path.lexically_relative(Base()).string();
    m["replay"] = "phishbench " + command_ + " --config " + snapshot_path.string();
    m["inputs"] = inputs_.empty() ? ordered_json::array() : inputs_;
    m["outputs"] = outputs_;
    for (const auto& [k, v] : extra_.items()) m[k] = v;
    WriteFileAtomic(Sidecar(".manifest.json", "manifest.json"), m.dump(2) + "\n");
  }

 private:
  fs::path Base() const { return dir_output_ ? out_ : out_.parent_path(); }

  std::string command_;
  const Settings& settings_;
  bool dir_output_;
  fs::path out_;
  ordered_json inputs_ = ordered_json::array();
  std::vector<std::string> outputs_;
  ordered_json extra_ = ordered_json::object();
};

std::string Fields(const ordered_json& j) { return j.dump(); }

TfidfConfig TfidfFrom(const Args& a) {
  TfidfConfig c;
  c.subject_vocab_cap = a.Uint("subject-vocab");
  c.body_vocab_cap = a.Uint("body-vocab");
  c.min_doc_freq = a.Uint("min-df");
  c.Validate();
  return c;
}

// "family.key=value" entries.
std::map<ModelFamily, Hyperparameters> ParamsFrom(const Args& a) {
  std::map<ModelFamily, Hyperparameters> out;
  if (!a.Has("params")) return out;
  for (const auto& item : a.List("params")) {
    const auto dot = item.find('.');
    const auto eq = item.find('=');
    Require(dot != std::string::npos && eq != std::string::npos && dot < eq, ErrorKind::kValidation,
            "param '" + item + "' must look like family.key=value");
    const auto family = ParseFamily(item.substr(0, dot));
    std::size_t used = 0;
    double v = 0.0;
    const auto text = item.substr(eq + 1);
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    Require(!text.empty() && used == text.size(), ErrorKind::kValidation, "param '" + item + "' has no numeric value");
    out[family][item.substr(dot + 1, eq - dot - 1)] = v;
  }
  return out;
}

std::vector<ModelChoice> ModelsFrom(const Args& a) {
  const auto params = ParamsFrom(a);
  std::vector<ModelChoice> out;
  for (const auto& name : a.List("models")) {
    ModelChoice c;
    c.family = ParseFamily(name);
    if (const auto it = params.find(c.family); it != params.end()) c.overrides = it->second;
    out.push_back(std::move(c));
  }
  for (const auto& [family, unused] : params) {
    Require(std::any_of(out.begin(), out.end(), [&](const ModelChoice& c) { return c.family == family; }),
            ErrorKind::kValidation, std::string("params given for unselected model '") + FamilyName(family) + "'");
  }
  return out;
}

// "name=path" or a bare name looked up as <data-dir>/<name>.jsonl; train
// entries may also be bare paths named by their stem.
std::vector<std::pair<std::string, fs::path>> NamedInputs(const Args& a, const std::string& key) {
  std::vector<std::pair<std::string, fs::path>> out;
  for (const auto& item : a.List(key)) {
    const auto eq = item.find('=');
    std::pair<std::string, fs::path> entry;
    if (eq != std::string::npos) {
      entry = {item.substr(0, eq), item.substr(eq + 1)};
    } else if (key == "train") {
      entry = {fs::path(item).stem().string(), item};
    } else {
      Require(a.Has("data-dir"), ErrorKind::kValidation,
              "dataset '" + item + "' has no path; give name=path or --data-dir");
      entry = {item, a.Path("data-dir") / (item + ".jsonl")};
    }
    Require(fs::is_regular_file(entry.second), ErrorKind::kValidation,
            "dataset '" + entry.first + "': " + entry.second.string() + " does not exist");
    out.push_back(std::move(entry));
  }
  return out;
}

std::string TestName(const Args& a) { return a.Has("test-name") ? a.Str("test-name") : a.Path("test").stem().string(); }

ProviderRegistry ProvidersFrom(const Args& a, Run& run) {
  if (!a.Has("providers")) return ProviderRegistry::Builtin();
  run.Input(a.Input("providers"));
  return ProviderRegistry::Load(a.Path("providers"));
}

ordered_json ProviderJson(const ProviderConfig& c) {
  ordered_json j;
  j["id"] = c.provider_id;
  j["model"] = c.model.empty() ? c.provider_id : c.model;
  j["endpoint"] = c.endpoint;
  j["temperature"] = c.temperature;
  j["max_retries"] = c.max_retries;
  j["credential_variable"] = c.kind == ProviderKind::kMock ? "" : c.CredentialVariable();
  if (c.kind == ProviderKind::kMock) j["mock_script"] = c.mock_script.string();
  return j;
}

ordered_json MetricsJson(const MetricsReport& m) {
  return {{"model", m.model_id}, {"train", m.train_source}, {"test", m.test_source}, {"tp", m.tp},
          {"fp", m.fp},          {"tn", m.tn},              {"fn", m.fn},             {"invalid", m.invalid_count},
          {"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

// Exports results into the run directory and records the outputs.
ordered_json Export(const ResultSet& results, Run& run, RunContext& ctx) {
  for (const auto& e : results.errors) {
    ctx.log.Event(LogLevel::kWarn, "cell.failed",
                  Fields({{"model", e.model_id}, {"train", e.train_source}, {"test", e.test_source},
                          {"seed", e.seed}, {"message", e.message}}));
  }
  if (results.runs.empty()) {
    run.Finish("failed");
    Fail(ErrorKind::kRuntime, "no results: every cell failed or the run was cancelled before any finished");
  }
  ExportReport(results, run.out());
  for (const auto& entry : fs::directory_iterator(run.out())) {
    const auto name = entry.path().filename().string();
    if (name != "manifest.json" && name != "config.snapshot" && name != "exchanges.jsonl") run.Output(entry.path());
  }
  for (const auto& c : SummarizeCells(results)) {
    ctx.log.Event(LogLevel::kDebug, "cell.summary",
                  Fields({{"group", c.group}, {"model", c.model_id}, {"train", c.train_source},
                          {"test", c.test_source}, {"f1_mean", c.f1.mean}, {"f1_std", c.f1.std}}));
  }
  ordered_json summary;
  summary["runs"] = results.runs.size();
  summary["errors"] = results.errors.size();
  summary["partial"] = results.partial;
  summary["out"] = run.out().string();
  return summary;
}

void FinishOrCancel(const ResultSet& results, Run& run) {
  run.extra()["partial"] = results.partial;
  run.extra()["notes"] = results.notes;
  run.Finish(results.partial ? "partial" : "ok");
  Require(!results.partial, ErrorKind::kRuntime, "cancelled: partial results written to " + run.out().string());
}

std::string Ingest(const Args& a, Run& run, RunContext& ctx) {
  DatasetRegistry registry = BuiltinRegistry();
  if (a.Has("registry")) {
    run.Input(a.Input("registry"));
    registry = DatasetRegistry::Load(a.Path("registry"));
  }
  const auto& descriptor = registry.Get(a.Str("dataset"));
  const auto in = a.Input("in");
  run.Input(in);
  auto result = IngestDataset(in, descriptor);
  for (const auto& w : result.warnings) ctx.log.Event(LogLevel::kWarn, "ingest.warning", Fields({{"message", w}}));
  WriteCanonical(result.records, run.out());
  run.Output(run.out());
  ordered_json report;
  report["format"] = "phishbench-ingest-report";
  report["version"] = 1;
  report["dataset"] = descriptor.name;
  report["records"] = result.records.size();
  report["stats"] = ordered_json::parse(CorpusStatsToJson(ComputeCorpusStats(result.records)));
  report["warnings"] = result.warnings;
  ordered_json rejects = ordered_json::array();
  for (const auto& r : result.rejects) rejects.push_back({{"row", r.row}, {"reason", r.reason}});
  report["rejects"] = rejects;
  const auto report_path = run.Sidecar(".ingest.json", "ingest.json");
  WriteFileAtomic(report_path, report.dump(2) + "\n");
  run.Output(report_path);
  run.Finish("ok");
  return ordered_json{{"records", result.records.size()}, {"rejected", result.rejects.size()},
                      {"warnings", result.warnings.size()}, {"out", run.out().string()}}
      .dump();
}

std::string Generate(const Args& a, Run& run, RunContext& ctx) {
  GenerationConfig config;
  config.country = a.Str("country");
  config.companies = a.Uint("companies");
  config.employees = a.Uint("employees");
  config.emails = a.Uint("emails");
  config.benign_ratio = a.Real("benign-ratio");
  config.temperature = a.Real("temperature");
  config.jobs = a.Jobs();
  config.Validate();
  auto registry = ProvidersFrom(a, run);
  const auto& provider = registry.Get(a.Str("provider"));
  if (provider.kind == ProviderKind::kMock) run.Input(provider.mock_script);
  PromptSet prompts = PromptSet::Builtin();
  if (a.Has("prompts")) {
    prompts = PromptSet::Load(a.Input("prompts"));
    for (const auto& name : PromptSet::Names()) run.Input(a.Path("prompts") / (name + ".txt"));
  }
  const auto log_path = run.Sidecar(".exchanges.jsonl", "exchanges.jsonl");
  if (run.out().has_parent_path()) fs::create_directories(run.out().parent_path());
  fs::remove(log_path);
  ExchangeLog log(log_path);
  auto client = LlmClient::Create(provider, &log);
  ctx.log.Event(LogLevel::kInfo, "generate.start",
                Fields({{"provider", provider.provider_id}, {"country", config.country},
                        {"requested", config.companies * config.employees * config.emails}}));
  const auto result = RunPipeline(*client, prompts, config, run.out(), &ctx.cancel);
  run.Output(run.out());
  run.Output(ReportPathFor(run.out()));
  run.Output(log_path);
  const auto& report = result.report;
  run.extra()["prompt_versions"] = prompts.Versions();
  run.extra()["provider"] = ProviderJson(provider);
  ctx.log.Event(LogLevel::kInfo, "generate.done",
                Fields({{"produced", report.produced()}, {"benign", report.produced_benign},
                        {"phishing", report.produced_phishing}, {"aborted", report.aborted},
                        {"cancelled", report.cancelled}}));
  run.Finish(report.aborted ? "aborted" : report.cancelled ? "partial" : "ok");
  Require(!report.aborted, ErrorKind::kRuntime, "generation aborted: " + report.abort_reason);
  Require(!report.cancelled, ErrorKind::kRuntime, "cancelled: partial corpus written to " + run.out().string());
  return ordered_json{{"requested", report.requested()}, {"produced", report.produced()},
                      {"benign", report.produced_benign}, {"phishing", report.produced_phishing},
                      {"out", run.out().string()}}
      .dump();
}

std::string TrainCommand(const Args& a, Run& run, RunContext& ctx) {
  Corpus train;
  std::vector<std::string> sources;
  std::set<std::string> ids;
  for (const auto& [name, path] : NamedInputs(a, "train")) {
    run.Input(path);
    for (auto& r : LoadCanonical(path)) {
      Require(ids.insert(r.id).second, ErrorKind::kValidation, "record id '" + r.id + "' appears twice in training data");
      train.push_back(std::move(r));
    }
    sources.push_back(name);
  }
  const auto family = ParseFamily(a.Str("model"));
  Hyperparameters overrides;
  const auto params = ParamsFrom(a);
  for (const auto& [f, h] : params) {
    Require(f == family, ErrorKind::kValidation, std::string("params given for unselected model '") + FamilyName(f) + "'");
    overrides = h;
  }
  const auto spec = ModelSpec::Make(family, a.Uint("seed"), overrides);
  ctx.log.Event(LogLevel::kInfo, "train.start", Fields({{"model", FamilyName(family)}, {"records", train.size()}}));
  const auto detector = TrainDetector(train, sources, spec, TfidfFrom(a));
  if (run.out().has_parent_path()) fs::create_directories(run.out().parent_path());
  detector.Save(run.out());
  run.Output(run.out());
  run.extra()["detector"] = detector.Name();
  run.Finish("ok");
  return ordered_json{{"detector", detector.Name()}, {"records", train.size()},
                      {"dimension", detector.tfidf().dimension()}, {"out", run.out().string()}}
      .dump();
}

std::string Predict(const Args& a, Run& run, RunContext&) {
  run.Input(a.Input("detector"));
  run.Input(a.Input("test"));
  const auto detector = Detector::Load(a.Path("detector"));
  const auto test = LoadCanonical(a.Path("test"));
  Require(!test.empty(), ErrorKind::kValidation, "empty test corpus");
  if (run.out().has_parent_path()) fs::create_directories(run.out().parent_path());
  SavePredictions(PredictionsFor(detector, test), run.out());
  run.Output(run.out());
  run.Finish("ok");
  return ordered_json{{"detector", detector.Name()}, {"predictions", test.size()}, {"out", run.out().string()}}.dump();
}

std::string Experiment(const std::string& command, const Args& a, Run& run, RunContext& ctx) {
  ExperimentOptions options;
  options.models = ModelsFrom(a);
  options.seeds = a.Seeds();
  options.tfidf = TfidfFrom(a);
  options.train_ratio = a.Real("train-ratio");
  options.jobs = a.Jobs();
  options.cancel = &ctx.cancel;
  Require(options.train_ratio > 0.0 && options.train_ratio < 1.0, ErrorKind::kValidation,
          "'train-ratio' must be in (0, 1)");
  std::vector<DatasetInput> datasets;
  for (const auto& [name, path] : NamedInputs(a, "datasets")) {
    run.Input(path);
    datasets.push_back({name, LoadCanonical(path)});
    ctx.log.Event(LogLevel::kInfo, "dataset.loaded", Fields({{"name", name}, {"records", datasets.back().corpus.size()}}));
  }
  ctx.log.Event(LogLevel::kInfo, command + ".start",
                Fields({{"datasets", datasets.size()}, {"models", options.models.size()}, {"seeds", options.seeds}}));
  const auto results = command == "cross-eval"
                           ? RunExperiment1(datasets, options)
                           : RunExperiment2(datasets, options,
                                            a.Has("holdouts") ? a.List("holdouts") : std::vector<std::string>{});
  auto summary = Export(results, run, ctx);
  FinishOrCancel(results, run);
  ctx.log.Event(LogLevel::kInfo, command + ".done", Fields(summary));
  return summary.dump();
}

std::string LlmEval(const Args& a, Run& run, RunContext& ctx) {
  run.Input(a.Input("test"));
  const auto test = LoadCanonical(a.Path("test"));
  auto registry = ProvidersFrom(a, run);
  std::vector<ProviderConfig> providers;
  for (const auto& id : a.Has("provider") ? a.List("provider") : registry.Ids()) {
    providers.push_back(registry.Get(id));
    if (providers.back().kind == ProviderKind::kMock) run.Input(providers.back().mock_script);
  }
  fs::create_directories(run.out());
  const auto log_path = run.out() / "exchanges.jsonl";
  fs::remove(log_path);
  ExchangeLog log(log_path);
  LlmEvalOptions options;
  if (a.Has("sample")) options.sample = a.Uint("sample");
  options.sample_seed = a.Uint("sample-seed");
  options.jobs = a.Jobs();
  options.cancel = &ctx.cancel;
  options.log = &log;
  ctx.log.Event(LogLevel::kInfo, "llm-eval.start", Fields({{"records", test.size()}, {"providers", providers.size()}}));
  const auto results = RunExperiment3(test, TestName(a), providers, options);
  ordered_json provider_list = ordered_json::array();
  for (const auto& p : providers) provider_list.push_back(ProviderJson(p));
  run.extra()["providers"] = provider_list;
  run.extra()["detection_prompt_version"] = DetectionPromptVersion();
  auto summary = Export(results, run, ctx);
  run.Output(log_path);
  FinishOrCancel(results, run);
  ctx.log.Event(LogLevel::kInfo, "llm-eval.done", Fields(summary));
  return summary.dump();
}

std::string ExternalTest(const Args& a, Run& run, RunContext& ctx) {
  const int modes = a.Has("detector") + a.Has("predictions") + a.Has("provider");
  Require(modes == 1, ErrorKind::kUsage, "external-test needs exactly one of --detector, --predictions, --provider");
  run.Input(a.Input("test"));
  const auto test = LoadCanonical(a.Path("test"));
  Require(!test.empty(), ErrorKind::kValidation, "empty test corpus");
  const auto name = TestName(a);
  ResultSet results;
  results.experiment = "external-test";
  results.datasets = {name};
  MetricsReport m;
  if (a.Has("detector")) {
    run.Input(a.Input("detector"));
    m = RunExternalTest(Detector::Load(a.Path("detector")), test, name);
  } else if (a.Has("predictions")) {
    run.Input(a.Input("predictions"));
    m = MetricsFromPredictions(LoadPredictions(a.Path("predictions")), test, "", name);
  } else {
    auto registry = ProvidersFrom(a, run);
    const auto& provider = registry.Get(a.Str("provider"));
    if (provider.kind == ProviderKind::kMock) run.Input(provider.mock_script);
    fs::create_directories(run.out());
    const auto log_path = run.out() / "exchanges.jsonl";
    fs::remove(log_path);
    ExchangeLog log(log_path);
    auto client = LlmClient::Create(provider, &log);
    LlmEvalOptions options;
    options.jobs = a.Jobs();
    options.cancel = &ctx.cancel;
    m = EvaluateLlm(*client, test, name, options);
    m.group = "external";
    run.extra()["provider"] = ProviderJson(provider);
    run.extra()["detection_prompt_version"] = DetectionPromptVersion();
    run.Output(log_path);
    if (ctx.cancel.load()) results.partial = true;
  }
  results.models = {m.model_id};
  results.seeds = {m.seed};
  results.runs = {m};
  if (results.partial) results.notes.push_back("cancelled: results are partial");
  auto summary = Export(results, run, ctx);
  summary["metrics"] = MetricsJson(m);
  FinishOrCancel(results, run);
  ctx.log.Event(LogLevel::kInfo, "external-test.done", Fields(summary));
  return summary.dump();
}

std::string Report(const Args& a, Run& run, RunContext& ctx) {
  const auto in = a.Input("results");
  run.Input(in);
  const auto results = ResultsFromJsonl(ReadFile(in));
  auto summary = Export(results, run, ctx);
  run.extra()["partial"] = results.partial;
  run.Finish("ok");
  return summary.dump();
}

}  // namespace

std::string RunCommand(std::string_view command_view, const Settings& settings, RunContext& context) {
  const std::string command(command_view);
  CommandKeys(command);
  if (const auto it = settings.find("log-level"); it != settings.end()) context.log.SetLevel(ParseLogLevel(it->second));
  const Args args(command, settings);
  const bool dir_output = command != "ingest" && command != "generate" && command != "train" && command != "predict";
  Run run(command, settings, dir_output);
  context.log.Event(LogLevel::kDebug, "command.start", Fields({{"command", command}, {"config", settings}}));
  if (command == "ingest") return Ingest(args, run, context);
  if (command == "generate") return Generate(args, run, context);
  if (command == "train") return TrainCommand(args, run, context);
  if (command == "predict") return Predict(args, run, context);
  if (command == "cross-eval" || command == "all-vs-one") return Experiment(command, args, run, context);
  if (command == "llm-eval") return LlmEval(args, run, context);
  if (command == "external-test") return ExternalTest(args, run, context);
  return Report(args, run, context);
}

}  // namespace phishbench
