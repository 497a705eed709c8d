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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "phishbench/phishbench.h"

namespace {

std::string Fixture(const std::string& name) { return std::string(PB_FIXTURES) + "/" + name; }

std::filesystem::path Scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("phishbench-capi-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct Context {
  pb_context* ctx = nullptr;
  std::vector<std::string> lines;
  Context() {
    EXPECT_EQ(pb_context_create(&ctx), PB_OK);
    pb_set_log_sink(
        ctx, [](const char* line, void* user) { static_cast<Context*>(user)->lines.emplace_back(line); }, this);
  }
  ~Context() { pb_context_destroy(ctx); }
};

TEST(CApi, StatusNamesAndExitCodes) {
  EXPECT_STREQ(pb_status_name(PB_OK), "ok");
  EXPECT_STREQ(pb_status_name(PB_ERR_VALIDATION), "validation");
  EXPECT_EQ(pb_exit_code(PB_OK), 0);
  EXPECT_EQ(pb_exit_code(PB_ERR_USAGE), 2);
  EXPECT_EQ(pb_exit_code(PB_ERR_VALIDATION), 3);
  EXPECT_EQ(pb_exit_code(PB_ERR_CONFIG), 3);
  EXPECT_EQ(pb_exit_code(PB_ERR_RUNTIME), 1);
  EXPECT_EQ(pb_exit_code(PB_ERR_IO), 1);
  EXPECT_EQ(pb_exit_code(PB_ERR_TRANSPORT), 1);
  EXPECT_STRNE(pb_version(), "");
}

TEST(CApi, CorpusAndDetectorHandles) {
  Context c;
  pb_corpus* train = nullptr;
  pb_corpus* test = nullptr;
  ASSERT_EQ(pb_corpus_load(c.ctx, Fixture("synth-a.jsonl").c_str(), &train), PB_OK);
  ASSERT_EQ(pb_corpus_load(c.ctx, Fixture("synth-b.jsonl").c_str(), &test), PB_OK);
  EXPECT_EQ(pb_corpus_size(train), 40u);

  char* stats = nullptr;
  ASSERT_EQ(pb_corpus_stats(c.ctx, train, &stats), PB_OK);
  EXPECT_NE(std::string(stats).find("\"total\": 40"), std::string::npos) << stats;
  pb_free(stats);

  pb_detector* det = nullptr;
  EXPECT_EQ(pb_detector_train(c.ctx, train, "a", "zz", 0, nullptr, &det), PB_ERR_VALIDATION);
  EXPECT_NE(std::string(pb_last_error(c.ctx)), "");
  ASSERT_EQ(pb_detector_train(c.ctx, train, "a", "lr", 3, "{\"l2\": 0.001}", &det), PB_OK);
  EXPECT_STREQ(pb_last_error(c.ctx), "");
  EXPECT_STREQ(pb_detector_name(det), "lr@a");

  const auto dir = Scratch("handles");
  const auto path = (dir / "det.json").string();
  ASSERT_EQ(pb_detector_save(c.ctx, det, path.c_str()), PB_OK);
  pb_detector* loaded = nullptr;
  ASSERT_EQ(pb_detector_load(c.ctx, path.c_str(), &loaded), PB_OK);

  char* p1 = nullptr;
  char* p2 = nullptr;
  ASSERT_EQ(pb_detector_predict(c.ctx, det, test, &p1), PB_OK);
  ASSERT_EQ(pb_detector_predict(c.ctx, loaded, test, &p2), PB_OK);
  EXPECT_STREQ(p1, p2);

  char* m1 = nullptr;
  char* m2 = nullptr;
  ASSERT_EQ(pb_detector_evaluate(c.ctx, loaded, test, "b", &m1), PB_OK);
  ASSERT_EQ(pb_predictions_evaluate(c.ctx, p1, test, "b", &m2), PB_OK);
  EXPECT_STREQ(m1, m2);
  EXPECT_EQ(pb_detector_evaluate(c.ctx, loaded, train, "a", &m1), PB_ERR_VALIDATION);
  EXPECT_NE(std::string(pb_last_error(c.ctx)).find("leak"), std::string::npos);
  EXPECT_EQ(pb_predictions_evaluate(c.ctx, p1, train, "a", &m1), PB_ERR_VALIDATION);

  pb_free(p1);
  pb_free(p2);
  pb_free(m1);
  pb_free(m2);
  pb_detector_destroy(det);
  pb_detector_destroy(loaded);
  pb_corpus_destroy(train);
  pb_corpus_destroy(test);
}

TEST(CApi, NullArgumentsAreUsageErrors) {
  Context c;
  pb_corpus* out = nullptr;
  EXPECT_EQ(pb_corpus_load(c.ctx, nullptr, &out), PB_ERR_USAGE);
  EXPECT_EQ(pb_corpus_load(nullptr, "x", &out), PB_ERR_USAGE);
  EXPECT_EQ(pb_corpus_load(c.ctx, "/nonexistent/x.jsonl", &out), PB_ERR_IO);
  EXPECT_EQ(pb_command_keys("bogus"), nullptr);
  EXPECT_NE(std::string(pb_command_keys("cross-eval")).find("datasets"), std::string::npos);
}

TEST(CApi, RunCommandAndLogs) {
  Context c;
  const auto dir = Scratch("run");
  const std::string settings = "datasets = synth-a,synth-b\ndata-dir = " PB_FIXTURES
                               "\nmodels = nb\nseeds = 0\nmin-df = 1\nout = " +
                               (dir / "out").string() + "\n";
  char* result = nullptr;
  ASSERT_EQ(pb_run(c.ctx, "cross-eval", settings.c_str(), &result), PB_OK) << pb_last_error(c.ctx);
  EXPECT_NE(std::string(result).find("\"runs\":4"), std::string::npos) << result;
  pb_free(result);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "manifest.json"));
  EXPECT_FALSE(c.lines.empty());
  EXPECT_EQ(c.lines.back().front(), '{');

  EXPECT_EQ(pb_run(c.ctx, "bogus", "", nullptr), PB_ERR_USAGE);
  EXPECT_EQ(pb_run(c.ctx, "cross-eval", "datasets = x\nout = /tmp/x\nnot a line\n", nullptr), PB_ERR_CONFIG);
  EXPECT_EQ(pb_set_log_level(c.ctx, "loud"), PB_ERR_CONFIG);

  pb_cancel(c.ctx);
  ASSERT_EQ(pb_run(c.ctx, "cross-eval", settings.c_str(), nullptr), PB_ERR_RUNTIME);
  pb_reset_cancel(c.ctx);
}

}  // namespace
