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

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <new>

#include "json.hpp"
#include "phishbench/app.hpp"
#include "phishbench/corpus.hpp"
#include "phishbench/evaluation.hpp"
#include "phishbench/phishbench.h"

struct pb_context {
  phishbench::RunContext run;
  std::string last_error;
};

struct pb_corpus {
  phishbench::Corpus records;
};

struct pb_detector {
  phishbench::Detector detector;
  std::string name;
};

namespace {

using phishbench::ErrorKind;

pb_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRuntime: return PB_ERR_RUNTIME;
    case ErrorKind::kUsage: return PB_ERR_USAGE;
    case ErrorKind::kValidation: return PB_ERR_VALIDATION;
    case ErrorKind::kIo: return PB_ERR_IO;
    case ErrorKind::kTransport: return PB_ERR_TRANSPORT;
    case ErrorKind::kConfig: return PB_ERR_CONFIG;
  }
  return PB_ERR_RUNTIME;
}

char* Copy(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(char** out, const std::string& s) {
  if (out) *out = Copy(s);
}

template <typename F>
pb_status Guard(pb_context* ctx, F&& body) {
  if (!ctx) return PB_ERR_USAGE;
  ctx->last_error.clear();
  try {
    body();
    return PB_OK;
  } catch (const phishbench::Error& e) {
    ctx->last_error = e.what();
    return StatusOf(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    ctx->last_error = e.what();
    return PB_ERR_IO;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return PB_ERR_RUNTIME;
  } catch (...) {
    ctx->last_error = "unknown failure";
    return PB_ERR_RUNTIME;
  }
}

void RequireArg(const void* p, const char* name) {
  phishbench::Require(p != nullptr, ErrorKind::kUsage, std::string(name) + " is NULL");
}

std::string MetricsJson(const phishbench::MetricsReport& m) {
  nlohmann::ordered_json j;
  j["model"] = m.model_id;
  j["train"] = m.train_source;
  j["test"] = m.test_source;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["tn"] = m.tn;
  j["fn"] = m.fn;
  j["invalid"] = m.invalid_count;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  return j.dump();
}

}  // namespace

extern "C" {

const char* pb_version(void) { return phishbench::kToolVersion; }

const char* pb_status_name(pb_status status) {
  switch (status) {
    case PB_OK: return "ok";
    case PB_ERR_RUNTIME: return "runtime";
    case PB_ERR_USAGE: return "usage";
    case PB_ERR_VALIDATION: return "validation";
    case PB_ERR_IO: return "io";
    case PB_ERR_TRANSPORT: return "transport";
    case PB_ERR_CONFIG: return "config";
  }
  return "runtime";
}

int pb_exit_code(pb_status status) {
  switch (status) {
    case PB_OK: return 0;
    case PB_ERR_USAGE: return 2;
    case PB_ERR_VALIDATION:
    case PB_ERR_CONFIG: return 3;
    default: return 1;
  }
}

pb_status pb_context_create(pb_context** out) {
  if (!out) return PB_ERR_USAGE;
  *out = new (std::nothrow) pb_context();
  return *out ? PB_OK : PB_ERR_RUNTIME;
}

void pb_context_destroy(pb_context* ctx) { delete ctx; }

const char* pb_last_error(const pb_context* ctx) { return ctx ? ctx->last_error.c_str() : "context is NULL"; }

pb_status pb_set_log_level(pb_context* ctx, const char* level) {
  return Guard(ctx, [&] {
    RequireArg(level, "level");
    ctx->run.log.SetLevel(phishbench::ParseLogLevel(level));
  });
}

void pb_set_log_sink(pb_context* ctx, pb_log_fn fn, void* user) {
  if (!ctx) return;
  if (!fn) {
    ctx->run.log.SetSink([](const std::string& line) { std::fprintf(stderr, "%s\n", line.c_str()); });
    return;
  }
  ctx->run.log.SetSink([fn, user](const std::string& line) { fn(line.c_str(), user); });
}

void pb_cancel(pb_context* ctx) {
  if (ctx) ctx->run.cancel.store(true);
}

void pb_reset_cancel(pb_context* ctx) {
  if (ctx) ctx->run.cancel.store(false);
}

pb_status pb_run(pb_context* ctx, const char* command, const char* settings, char** result_json) {
  return Guard(ctx, [&] {
    RequireArg(command, "command");
    const auto flags = phishbench::ParseSettings(settings ? settings : "", "flags");
    const auto resolved = phishbench::ResolveSettings(command, flags);
    Emit(result_json, phishbench::RunCommand(command, resolved, ctx->run));
  });
}

const char* pb_command_keys(const char* command) {
  static const auto joined = [] {
    std::map<std::string, std::string> out;
    for (const auto& c : phishbench::Commands()) {
      std::string keys = "config";
      for (const auto& k : phishbench::CommandKeys(c)) keys += "," + k;
      out[c] = keys;
    }
    return out;
  }();
  if (!command) return nullptr;
  const auto it = joined.find(command);
  return it == joined.end() ? nullptr : it->second.c_str();
}

void pb_free(char* text) { std::free(text); }

pb_status pb_corpus_load(pb_context* ctx, const char* path, pb_corpus** out) {
  return Guard(ctx, [&] {
    RequireArg(path, "path");
    RequireArg(out, "out");
    *out = new pb_corpus{phishbench::LoadCanonical(path)};
  });
}

pb_status pb_corpus_ingest(pb_context* ctx, const char* registry_path, const char* dataset, const char* path,
                           pb_corpus** out) {
  return Guard(ctx, [&] {
    RequireArg(dataset, "dataset");
    RequireArg(path, "path");
    RequireArg(out, "out");
    const auto registry =
        registry_path ? phishbench::DatasetRegistry::Load(registry_path) : phishbench::BuiltinRegistry();
    auto result = phishbench::IngestDataset(path, registry.Get(dataset));
    *out = new pb_corpus{std::move(result.records)};
  });
}

pb_status pb_corpus_save(pb_context* ctx, const pb_corpus* corpus, const char* path) {
  return Guard(ctx, [&] {
    RequireArg(corpus, "corpus");
    RequireArg(path, "path");
    phishbench::WriteCanonical(corpus->records, path);
  });
}

size_t pb_corpus_size(const pb_corpus* corpus) { return corpus ? corpus->records.size() : 0; }

pb_status pb_corpus_stats(pb_context* ctx, const pb_corpus* corpus, char** stats_json) {
  return Guard(ctx, [&] {
    RequireArg(corpus, "corpus");
    RequireArg(stats_json, "stats_json");
    Emit(stats_json, phishbench::CorpusStatsToJson(phishbench::ComputeCorpusStats(corpus->records)));
  });
}

void pb_corpus_destroy(pb_corpus* corpus) { delete corpus; }

pb_status pb_detector_train(pb_context* ctx, const pb_corpus* train, const char* source_name, const char* family,
                            uint64_t seed, const char* params_json, pb_detector** out) {
  return Guard(ctx, [&] {
    RequireArg(train, "train");
    RequireArg(source_name, "source_name");
    RequireArg(family, "family");
    RequireArg(out, "out");
    phishbench::Hyperparameters overrides;
    if (params_json) {
      const auto j = nlohmann::json::parse(params_json, nullptr, false);
      phishbench::Require(j.is_object(), ErrorKind::kValidation, "params_json must be a JSON object");
      for (const auto& [k, v] : j.items()) {
        phishbench::Require(v.is_number(), ErrorKind::kValidation, "hyperparameter '" + k + "' must be a number");
        overrides[k] = v.get<double>();
      }
    }
    const auto spec = phishbench::ModelSpec::Make(phishbench::ParseFamily(family), seed, overrides);
    auto detector = phishbench::TrainDetector(train->records, {source_name}, spec);
    auto name = detector.Name();
    *out = new pb_detector{std::move(detector), std::move(name)};
  });
}

pb_status pb_detector_load(pb_context* ctx, const char* path, pb_detector** out) {
  return Guard(ctx, [&] {
    RequireArg(path, "path");
    RequireArg(out, "out");
    auto detector = phishbench::Detector::Load(path);
    auto name = detector.Name();
    *out = new pb_detector{std::move(detector), std::move(name)};
  });
}

pb_status pb_detector_save(pb_context* ctx, const pb_detector* detector, const char* path) {
  return Guard(ctx, [&] {
    RequireArg(detector, "detector");
    RequireArg(path, "path");
    detector->detector.Save(path);
  });
}

const char* pb_detector_name(const pb_detector* detector) { return detector ? detector->name.c_str() : ""; }

pb_status pb_detector_predict(pb_context* ctx, const pb_detector* detector, const pb_corpus* corpus,
                              char** predictions_text) {
  return Guard(ctx, [&] {
    RequireArg(detector, "detector");
    RequireArg(corpus, "corpus");
    RequireArg(predictions_text, "predictions_text");
    Emit(predictions_text,
         phishbench::SerializePredictions(phishbench::PredictionsFor(detector->detector, corpus->records)));
  });
}

pb_status pb_detector_evaluate(pb_context* ctx, const pb_detector* detector, const pb_corpus* corpus,
                               const char* test_name, char** metrics_json) {
  return Guard(ctx, [&] {
    RequireArg(detector, "detector");
    RequireArg(corpus, "corpus");
    RequireArg(metrics_json, "metrics_json");
    Emit(metrics_json,
         MetricsJson(phishbench::RunExternalTest(detector->detector, corpus->records, test_name ? test_name : "")));
  });
}

void pb_detector_destroy(pb_detector* detector) { delete detector; }

pb_status pb_predictions_evaluate(pb_context* ctx, const char* predictions_text, const pb_corpus* corpus,
                                  const char* test_name, char** metrics_json) {
  return Guard(ctx, [&] {
    RequireArg(predictions_text, "predictions_text");
    RequireArg(corpus, "corpus");
    RequireArg(metrics_json, "metrics_json");
    const auto file = phishbench::ParsePredictions(predictions_text);
    Emit(metrics_json,
         MetricsJson(phishbench::MetricsFromPredictions(file, corpus->records, "", test_name ? test_name : "")));
  });
}

}  // extern "C"
