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

#ifndef PHISHBENCH_PHISHBENCH_H_
#define PHISHBENCH_PHISHBENCH_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PB_BUILDING_LIBRARY)
#define PB_API __attribute__((visibility("default")))
#else
#define PB_API
#endif

typedef enum pb_status {
  PB_OK = 0,
  PB_ERR_RUNTIME = 1,
  PB_ERR_USAGE = 2,
  PB_ERR_VALIDATION = 3,
  PB_ERR_IO = 4,
  PB_ERR_TRANSPORT = 5,
  PB_ERR_CONFIG = 6
} pb_status;

typedef struct pb_context pb_context;
typedef struct pb_corpus pb_corpus;
typedef struct pb_detector pb_detector;

/* Log sink: receives one JSON object per call, without a trailing newline. */
typedef void (*pb_log_fn)(const char* line, void* user);

PB_API const char* pb_version(void);
/* "ok", "runtime", "usage", "validation", "io", "transport", "config". */
PB_API const char* pb_status_name(pb_status status);
/* Process exit code for a status: 0, 2 usage, 3 validation and config, 1 otherwise. */
PB_API int pb_exit_code(pb_status status);

PB_API pb_status pb_context_create(pb_context** out);
PB_API void pb_context_destroy(pb_context* ctx);
/* Message of the last failed call on this context; "" after a success. */
PB_API const char* pb_last_error(const pb_context* ctx);
/* "error", "warn", "info" or "debug". */
PB_API pb_status pb_set_log_level(pb_context* ctx, const char* level);
/* NULL restores the default sink (stderr). */
PB_API void pb_set_log_sink(pb_context* ctx, pb_log_fn fn, void* user);
/* Requests cancellation of the running command. Safe to call from a signal
   handler; in-flight work finishes and partial results are written. */
PB_API void pb_cancel(pb_context* ctx);
PB_API void pb_reset_cancel(pb_context* ctx);

/* Subcommands. `settings` holds `key = value` lines (flag names without the
   leading dashes); a `config` key names a settings file whose values the
   other lines override. On success *result_json (if non-NULL) receives a
   JSON summary to release with pb_free. */
PB_API pb_status pb_run(pb_context* ctx, const char* command, const char* settings, char** result_json);
/* Comma-separated settings keys the command reads, or NULL for an unknown
   command. The string is owned by the library. */
PB_API const char* pb_command_keys(const char* command);

PB_API void pb_free(char* text);

/* Canonical corpora. */
PB_API pb_status pb_corpus_load(pb_context* ctx, const char* path, pb_corpus** out);
/* Ingests a raw file with a dataset descriptor from `registry_path`, or the
   built-in registry when it is NULL. */
PB_API pb_status pb_corpus_ingest(pb_context* ctx, const char* registry_path, const char* dataset,
                                  const char* path, pb_corpus** out);
PB_API pb_status pb_corpus_save(pb_context* ctx, const pb_corpus* corpus, const char* path);
PB_API size_t pb_corpus_size(const pb_corpus* corpus);
PB_API pb_status pb_corpus_stats(pb_context* ctx, const pb_corpus* corpus, char** stats_json);
PB_API void pb_corpus_destroy(pb_corpus* corpus);

/* Detectors: a fitted TF-IDF transform plus a trained model. `params_json`
   is NULL or an object of hyperparameter overrides. */
PB_API pb_status pb_detector_train(pb_context* ctx, const pb_corpus* train, const char* source_name,
                                   const char* family, uint64_t seed, const char* params_json,
                                   pb_detector** out);
PB_API pb_status pb_detector_load(pb_context* ctx, const char* path, pb_detector** out);
PB_API pb_status pb_detector_save(pb_context* ctx, const pb_detector* detector, const char* path);
/* "<family>@<sources>"; owned by the detector. */
PB_API const char* pb_detector_name(const pb_detector* detector);
/* Predictions file text (header plus one line per record); release with pb_free. */
PB_API pb_status pb_detector_predict(pb_context* ctx, const pb_detector* detector, const pb_corpus* corpus,
                                     char** predictions_text);
/* Metrics JSON for a detector on a test corpus disjoint from its training ids. */
PB_API pb_status pb_detector_evaluate(pb_context* ctx, const pb_detector* detector, const pb_corpus* corpus,
                                      const char* test_name, char** metrics_json);
PB_API void pb_detector_destroy(pb_detector* detector);

/* Validates a predictions file against a corpus and scores it. */
PB_API pb_status pb_predictions_evaluate(pb_context* ctx, const char* predictions_text, const pb_corpus* corpus,
                                         const char* test_name, char** metrics_json);

#ifdef __cplusplus
}
#endif

#endif /* PHISHBENCH_PHISHBENCH_H_ */
