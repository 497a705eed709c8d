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

#include <boost/rational.hpp>
#include <fstream>
#include <set>

#include "json.hpp"
#include "phishbench/evaluation.hpp"
#include "phishbench/rng.hpp"
#include "test_util.hpp"

namespace phishbench {
namespace {

using testing::MakeRecord;
using testing::ScratchDir;

const std::vector<std::string> kPhishWords = {"verify", "account", "password", "urgent", "suspended",
                                              "click", "login", "invoice", "refund", "security"};
const std::vector<std::string> kBenignWords = {"meeting", "agenda", "lunch", "report", "project",
                                               "schedule", "team", "review", "notes", "coffee"};
const std::vector<std::string> kShared = {"the", "please", "today", "thanks", "regards", "team", "update"};

// Two separable classes with shared filler; `mix` moves words across classes.
Corpus Synthetic(const std::string& name, std::size_t phishing, std::size_t benign, std::uint64_t seed,
                 double mix = 0.1) {
  Rng rng(seed);
  Corpus corpus;
  auto text = [&](bool phish, std::size_t words) {
    std::string out;
    for (std::size_t w = 0; w < words; ++w) {
      const bool swap = rng.Uniform() < mix;
      const auto& pool = rng.Uniform() < 0.3 ? kShared : ((phish != swap) ? kPhishWords : kBenignWords);
      out += pool[rng.Below(pool.size())] + " ";
    }
    return out;
  };
  for (std::size_t i = 0; i < phishing + benign; ++i) {
    const bool phish = i < phishing;
    corpus.push_back(MakeRecord(name + "-" + std::to_string(i), text(phish, 3), text(phish, 25),
                                phish ? Label::kPhishing : Label::kBenign, Language::kEn, name));
  }
  return corpus;
}

TfidfConfig SmallTfidf() {
  TfidfConfig c;
  c.min_doc_freq = 1;
  return c;
}

ExperimentOptions Options(std::vector<ModelFamily> families, std::vector<std::uint64_t> seeds = {0, 1, 2}) {
  ExperimentOptions o;
  for (const auto f : families) o.models.push_back({f, {}});
  o.seeds = std::move(seeds);
  o.tfidf = SmallTfidf();
  return o;
}

std::size_t CountLabel(const Corpus& c, const std::vector<std::size_t>& idx, Label label) {
  std::size_t n = 0;
  for (const auto i : idx) n += c[i].label == label;
  return n;
}

TEST(Split, FiveAndFive) {
  const auto corpus = Synthetic("a", 5, 5, 1);
  const auto plan = StratifiedSplit(corpus, 0.7, 0);
  EXPECT_EQ(CountLabel(corpus, plan.test, Label::kPhishing), 2u);
  EXPECT_EQ(CountLabel(corpus, plan.test, Label::kBenign), 2u);
  EXPECT_EQ(plan.train.size(), 6u);
}

TEST(Split, ThirtySeventy) {
  const auto corpus = Synthetic("a", 30, 70, 1);
  const auto plan = StratifiedSplit(corpus, 0.7, 3);
  EXPECT_EQ(CountLabel(corpus, plan.test, Label::kPhishing), 9u);
  EXPECT_EQ(CountLabel(corpus, plan.test, Label::kBenign), 21u);
  std::set<std::size_t> all(plan.train.begin(), plan.train.end());
  for (const auto i : plan.test) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 100u);
}

TEST(Split, DeterministicAndSeedDependent) {
  const auto corpus = Synthetic("a", 40, 40, 1);
  const auto a = StratifiedSplit(corpus, 0.7, 7);
  const auto b = StratifiedSplit(corpus, 0.7, 7);
  const auto c = StratifiedSplit(corpus, 0.7, 8);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.test, c.test);
}

TEST(Split, TooFewPerClass) {
  auto corpus = Synthetic("a", 1, 5, 1);
  EXPECT_THROW(StratifiedSplit(corpus, 0.7, 0), Error);
  EXPECT_THROW(StratifiedSplit(Synthetic("a", 5, 5, 1), 1.0, 0), Error);
  // Two per class still leaves one for training.
  EXPECT_EQ(StratifiedTestCount(2, 0.1), 1u);
  EXPECT_EQ(StratifiedTestCount(2, 0.7), 1u);
}

TEST(Metrics, ExhaustiveAgainstRationals) {
  using Q = boost::rational<long>;
  auto value = [](Q q) { return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator()); };
  for (std::size_t tp = 0; tp <= 20; ++tp) {
    for (std::size_t fp = 0; tp + fp <= 20; ++fp) {
      for (std::size_t tn = 0; tp + fp + tn <= 20; ++tn) {
        for (std::size_t fn = 0; tp + fp + tn + fn <= 20; ++fn) {
          const auto m = MetricsFromCounts(tp, fp, tn, fn);
          const long TP = static_cast<long>(tp), FP = static_cast<long>(fp), TN = static_cast<long>(tn),
                     FN = static_cast<long>(fn);
          const Q p = TP + FP ? Q(TP, TP + FP) : Q(0);
          const Q r = TP + FN ? Q(TP, TP + FN) : Q(0);
          const Q f = p + r != Q(0) ? Q(2) * p * r / (p + r) : Q(0);
          const Q a = TP + FP + TN + FN ? Q(TP + TN, TP + FP + TN + FN) : Q(0);
          ASSERT_DOUBLE_EQ(m.precision, value(p));
          ASSERT_DOUBLE_EQ(m.recall, value(r));
          ASSERT_DOUBLE_EQ(m.f1, value(f));
          ASSERT_DOUBLE_EQ(m.accuracy, value(a));
        }
      }
    }
  }
}

TEST(Metrics, InvalidVerdictsCountAsBenign) {
  const std::vector<Verdict> v = {Verdict::kPhishing, Verdict::kInvalid, Verdict::kInvalid, Verdict::kBenign};
  const std::vector<Label> g = {Label::kPhishing, Label::kPhishing, Label::kBenign, Label::kBenign};
  const auto m = ComputeMetrics(v, g);
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.fn, 1u);
  EXPECT_EQ(m.tn, 2u);
  EXPECT_EQ(m.invalid_count, 2u);
  EXPECT_THROW(ComputeMetrics(std::vector<Label>{}, std::vector<Label>{}), Error);
}

TEST(Summary, SampleStd) {
  const std::vector<double> v = {1, 2, 3, 4};
  const auto s = Summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_EQ(Summarize(std::vector<double>{3}).std, 0.0);
}

TEST(Leak, Guard) {
  const std::vector<std::string> train = {"a", "b"};
  EXPECT_NO_THROW(AssertNoLeak(train, std::vector<std::string>{"c"}, "x"));
  EXPECT_THROW(AssertNoLeak(train, std::vector<std::string>{"c", "b"}, "x"), Error);
}

TEST(CrossEval, MatrixShapeAndDrop) {
  const std::vector<DatasetInput> data = {{"a", Synthetic("a", 30, 30, 1)},
                                          {"b", Synthetic("b", 30, 30, 2, 0.35)}};
  const auto r = RunExperiment1(data, Options({ModelFamily::kLR, ModelFamily::kNB}));
  EXPECT_TRUE(r.errors.empty());
  EXPECT_EQ(r.runs.size(), 2u * 3u * 2u * 2u);
  for (const auto& model : {"lr", "nb"}) {
    const auto m = BuildMatrix(r, model);
    ASSERT_EQ(m.cells.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        ASSERT_TRUE(m.cells[i][j].has_value());
        EXPECT_EQ(m.cells[i][j]->f1.n, 3u);
      }
      ASSERT_TRUE(m.avg_drop[i].has_value());
      EXPECT_NEAR(*m.avg_drop[i], m.cells[i][i]->f1.mean - m.cells[i][1 - i]->f1.mean, 1e-12);
    }
  }
}

TEST(CrossEval, SingleDatasetHasNoDrop) {
  const auto r = RunExperiment1({{"a", Synthetic("a", 20, 20, 1)}}, Options({ModelFamily::kLR}, {0}));
  const auto m = BuildMatrix(r, "lr");
  ASSERT_TRUE(m.cells[0][0].has_value());
  EXPECT_FALSE(m.avg_drop[0].has_value());
}

TEST(CrossEval, DuplicatedDatasetMatchesDiagonal) {
  const auto c = Synthetic("a", 25, 25, 4, 0.3);
  const auto r = RunExperiment1({{"a", c}, {"b", c}}, Options({ModelFamily::kLR, ModelFamily::kRF}, {0, 1}));
  for (const auto& model : {"lr", "rf"}) {
    const auto m = BuildMatrix(r, model);
    EXPECT_DOUBLE_EQ(m.cells[0][1]->f1.mean, m.cells[0][0]->f1.mean);
    EXPECT_DOUBLE_EQ(m.cells[1][0]->f1.mean, m.cells[1][1]->f1.mean);
    EXPECT_NEAR(*m.avg_drop[0], 0.0, 1e-12);
  }
}

TEST(CrossEval, JobsDoNotChangeResults) {
  const std::vector<DatasetInput> data = {{"a", Synthetic("a", 20, 20, 1)}, {"b", Synthetic("b", 20, 20, 2)}};
  auto o = Options({ModelFamily::kLR, ModelFamily::kMLP}, {0, 1});
  const auto serial = ResultsToJsonl(RunExperiment1(data, o));
  o.jobs = 3;
  EXPECT_EQ(ResultsToJsonl(RunExperiment1(data, o)), serial);
}

TEST(CrossEval, InputChecks) {
  const auto c = Synthetic("a", 10, 10, 1);
  EXPECT_THROW(RunExperiment1({{"a", c}, {"a", c}}, Options({ModelFamily::kLR})), Error);
  EXPECT_THROW(RunExperiment1({{"a+b", c}}, Options({ModelFamily::kLR})), Error);
  EXPECT_THROW(RunExperiment1({{"a", c}}, Options({ModelFamily::kLR, ModelFamily::kLR})), Error);
  EXPECT_THROW(RunExperiment1({{"a", c}}, Options({})), Error);
}

TEST(CrossEval, CancelledBeforeStartIsPartial) {
  std::atomic<bool> cancel{true};
  auto o = Options({ModelFamily::kLR}, {0});
  o.cancel = &cancel;
  const auto r = RunExperiment1({{"a", Synthetic("a", 10, 10, 1)}}, o);
  EXPECT_TRUE(r.partial);
  EXPECT_TRUE(r.runs.empty());
}

TEST(AllVsOne, GroupsAndComparisons) {
  const std::vector<DatasetInput> data = {{"a", Synthetic("a", 20, 20, 1)},
                                          {"b", Synthetic("b", 20, 20, 2)},
                                          {"c", Synthetic("c", 20, 20, 3, 0.3)}};
  const auto r = RunExperiment2(data, Options({ModelFamily::kLR, ModelFamily::kNB}, {0, 1, 2}));
  std::map<std::string, std::size_t> groups;
  for (const auto& run : r.runs) ++groups[run.group];
  // 3 holdouts x 3 seeds x 2 models, each with 2 constituents; 3 singles.
  EXPECT_EQ(groups["holdout"], 18u);
  EXPECT_EQ(groups["constituent"], 36u);
  EXPECT_EQ(groups["single"], 18u);
  for (const auto& run : r.runs) {
    if (run.group == "holdout") EXPECT_EQ(run.train_source.find(run.test_source), std::string::npos);
  }
  const auto cmp = StandardComparisons(r);
  ASSERT_EQ(cmp.size(), 3u);
  EXPECT_EQ(cmp[1].label_a, "lr single");
  EXPECT_EQ(cmp[1].a.n, 9u);
  EXPECT_EQ(cmp[1].b.n, 18u);
}

TEST(AllVsOne, UnknownHoldout) {
  const std::vector<DatasetInput> data = {{"a", Synthetic("a", 10, 10, 1)}, {"b", Synthetic("b", 10, 10, 2)}};
  try {
    RunExperiment2(data, Options({ModelFamily::kLR}), {"zz"});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
}

TEST(Report, JsonlRoundTripIsByteIdentical) {
  const std::vector<DatasetInput> data = {{"a", Synthetic("a", 15, 15, 1)}, {"b", Synthetic("b", 15, 15, 2)}};
  auto r = RunExperiment1(data, Options({ModelFamily::kNB}, {0, 1}));
  r.errors.push_back({"nb", "a", "b", 9, "synthetic failure"});
  r.notes.push_back("note");
  const auto text = ResultsToJsonl(r);
  EXPECT_EQ(ResultsToJsonl(ResultsFromJsonl(text)), text);
  EXPECT_THROW(ResultsFromJsonl("{\"kind\":\"run\"}\n"), Error);
}

TEST(Report, ExportLayout) {
  const std::vector<DatasetInput> data = {{"a", Synthetic("a", 15, 15, 1)}, {"b", Synthetic("b", 15, 15, 2)}};
  const auto r = RunExperiment1(data, Options({ModelFamily::kLR}, {0, 1}));
  const auto dir = ScratchDir("export");
  ExportReport(r, dir);
  for (const auto* f : {"results.jsonl", "summary.json", "plot.csv", "matrix_lr.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "matrix_lr.csv");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "train,a,b,avg_drop");
  EXPECT_EQ(lines[1].rfind("a,", 0), 0u);
  EXPECT_EQ(std::count(lines[1].begin(), lines[1].end(), ','), 3);
  const auto summary = nlohmann::json::parse(ReadFile(dir / "summary.json"));
  EXPECT_EQ(summary["cells"].size(), 4u);

  ResultSet empty;
  empty.experiment = "cross-eval";
  EXPECT_THROW(ExportReport(empty, ScratchDir("export-empty")), Error);
}

TEST(Report, HoleLeavesBlankCell) {
  const std::vector<DatasetInput> data = {{"a", Synthetic("a", 15, 15, 1)}, {"b", Synthetic("b", 15, 15, 2)}};
  auto r = RunExperiment1(data, Options({ModelFamily::kLR}, {0}));
  std::erase_if(r.runs, [](const MetricsReport& m) { return m.train_source == "a" && m.test_source == "b"; });
  const auto m = BuildMatrix(r, "lr");
  EXPECT_FALSE(m.cells[0][1].has_value());
  EXPECT_FALSE(m.avg_drop[0].has_value());
  const auto dir = ScratchDir("export-hole");
  ExportReport(r, dir);
  std::ifstream in(dir / "matrix_lr.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(row.substr(row.size() - 2), ",,");
}

TEST(Detector, SaveLoadPredictsIdentically) {
  const auto train = Synthetic("a", 20, 20, 1);
  const auto test = Synthetic("t", 10, 10, 9);
  const auto d = TrainDetector(train, {"a"}, ModelSpec::Make(ModelFamily::kRF, 5), SmallTfidf());
  const auto path = ScratchDir("detector") / "d.json";
  d.Save(path);
  const auto loaded = Detector::Load(path);
  EXPECT_EQ(loaded.Name(), "rf@a");
  EXPECT_EQ(loaded.Predict(test), d.Predict(test));
  EXPECT_EQ(loaded.Scores(test), d.Scores(test));
  EXPECT_THROW(RunExternalTest(d, train, "a"), Error);
  EXPECT_THROW(RunExternalTest(d, Corpus{}, "t"), Error);
  const auto m = RunExternalTest(loaded, test, "t");
  EXPECT_EQ(m.total(), 20u);
  EXPECT_GT(m.f1, 0.8);
}

TEST(Predictions, RoundTripAndMetrics) {
  const auto train = Synthetic("a", 20, 20, 1);
  const auto test = Synthetic("t", 10, 10, 9);
  const auto d = TrainDetector(train, {"a"}, ModelSpec::Make(ModelFamily::kLR, 5), SmallTfidf());
  const auto file = PredictionsFor(d, test);
  const auto text = SerializePredictions(file);
  const auto parsed = ParsePredictions(text);
  EXPECT_EQ(SerializePredictions(parsed), text);
  const auto via_file = MetricsFromPredictions(parsed, test, "", "t");
  const auto direct = RunExternalTest(d, test, "t");
  EXPECT_EQ(via_file.model_id, "lr@a");
  EXPECT_EQ(via_file.tp, direct.tp);
  EXPECT_EQ(via_file.tn, direct.tn);
  EXPECT_EQ(via_file.f1, direct.f1);
}

TEST(Predictions, SchemaErrors) {
  auto line_error = [](const std::string& text) {
    try {
      ParsePredictions(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(line_error("{\"id\":\"x\",\"label\":\"phishing\"}\n").find("line 1"), std::string::npos);
  EXPECT_NE(line_error("{\"id\":\"x\",\"label\":\"spam\",\"score\":1}\n").find("label"), std::string::npos);
  EXPECT_NE(line_error("{\"id\":\"x\",\"label\":\"benign\",\"score\":1.5}\n").find("score"), std::string::npos);
  EXPECT_NE(line_error("{\"id\":\"x\",\"label\":\"benign\",\"score\":0}\nnot json\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(line_error("{\"id\":\"x\",\"label\":\"benign\",\"score\":0}\n{\"format\":\"phishbench-predictions\","
                       "\"version\":1}\n")
                .find("first line"),
            std::string::npos);
  EXPECT_NE(line_error("{\"format\":\"phishbench-predictions\",\"version\":2}\n").find("version"),
            std::string::npos);
  EXPECT_TRUE(line_error("{\"id\":\"x\",\"label\":\"benign\",\"score\":0}\r\n\n").empty());
}

TEST(Predictions, CoverageValidation) {
  const Corpus corpus = {MakeRecord("a", "s", "b", Label::kPhishing), MakeRecord("b", "s", "b", Label::kBenign)};
  PredictionsFile f;
  f.predictions = {{"a", Label::kPhishing, 1.0}, {"b", Label::kBenign, 0.0}};
  EXPECT_NO_THROW(ValidatePredictions(f, corpus));
  auto dup = f;
  dup.predictions.push_back({"a", Label::kBenign, 0.0});
  EXPECT_THROW(ValidatePredictions(dup, corpus), Error);
  auto missing = f;
  missing.predictions.pop_back();
  EXPECT_THROW(ValidatePredictions(missing, corpus), Error);
  auto extra = f;
  extra.predictions.push_back({"c", Label::kBenign, 0.0});
  EXPECT_THROW(ValidatePredictions(extra, corpus), Error);
  const auto m = MetricsFromPredictions(f, corpus, "ext", "x");
  EXPECT_EQ(m.f1, 1.0);
}

// 25 phishing then 25 benign records; responses are scripted per call index.
Corpus FiftyEmails() {
  Corpus c;
  for (int i = 0; i < 50; ++i) {
    const bool phish = i < 25;
    c.push_back(MakeRecord("m" + std::to_string(i), "subject " + std::to_string(i),
                           phish ? "PHISH-MARK please verify your account" : "see you at lunch",
                           phish ? Label::kPhishing : Label::kBenign));
  }
  return c;
}

ProviderConfig ScriptedProvider(const std::string& id, const std::string& script_text) {
  const auto path = ScratchDir("llm-" + id) / "script.jsonl";
  std::ofstream(path) << script_text;
  ProviderConfig c;
  c.provider_id = id;
  c.kind = ProviderKind::kMock;
  c.mock_script = path;
  c.max_retries = 0;
  return c;
}

std::string IndexRule(std::size_t index, const std::string& response) {
  return nlohmann::json{{"match", "index"}, {"index", index}, {"response", response}}.dump() + "\n";
}

TEST(ZeroShot, ScriptedCounts) {
  // Phishing 0-19 "phishing", 20-22 "benign", 23-24 unparseable twice.
  // Benign 0-21 "legitimate", 22-23 "phishing", 24 unparseable then "benign".
  std::string script;
  std::size_t call = 0;
  for (int i = 0; i < 25; ++i) {
    if (i < 20) script += IndexRule(call++, "Phishing.");
    else if (i < 23) script += IndexRule(call++, "benign");
    else {
      script += IndexRule(call++, "no idea");
      script += IndexRule(call++, "still unsure");
    }
  }
  for (int i = 0; i < 25; ++i) {
    if (i < 22) script += IndexRule(call++, "This looks legitimate");
    else if (i < 24) script += IndexRule(call++, "phishing");
    else {
      script += IndexRule(call++, "hmm");
      script += IndexRule(call++, "Benign");
    }
  }
  LlmEvalOptions options;
  options.jobs = 4;
  const auto r = RunExperiment3(FiftyEmails(), "fifty", {ScriptedProvider("scripted", script)}, options);
  ASSERT_EQ(r.runs.size(), 1u);
  const auto& m = r.runs[0];
  EXPECT_EQ(m.tp, 20u);
  EXPECT_EQ(m.fn, 5u);
  EXPECT_EQ(m.tn, 23u);
  EXPECT_EQ(m.fp, 2u);
  EXPECT_EQ(m.invalid_count, 2u);
  EXPECT_DOUBLE_EQ(m.f1, 40.0 / 47.0);
  EXPECT_DOUBLE_EQ(m.accuracy, 43.0 / 50.0);
  EXPECT_EQ(m.group, "llm");
  EXPECT_EQ(m.model_id, "scripted");
}

TEST(ZeroShot, EchoGoldAndAllInvalid) {
  const std::string echo = R"({"match":"contains","text":"PHISH-MARK","response":"phishing"}
{"match":"default","response":"benign"}
)";
  const std::string mute = R"({"match":"default","response":"I cannot say"})";
  LlmEvalOptions options;
  options.jobs = 3;
  const auto r = RunExperiment3(FiftyEmails(), "fifty",
                                {ScriptedProvider("echo", echo), ScriptedProvider("mute", mute)}, options);
  ASSERT_EQ(r.runs.size(), 2u);
  EXPECT_EQ(r.runs[0].f1, 1.0);
  EXPECT_EQ(r.runs[1].invalid_count, 50u);
  EXPECT_EQ(r.runs[1].tp + r.runs[1].fp, 0u);
}

TEST(ZeroShot, SampleDisclosedAndMissingScriptSkipped) {
  auto broken = ScriptedProvider("broken", "");
  broken.mock_script = "/nonexistent/script.jsonl";
  LlmEvalOptions options;
  options.sample = 10;
  options.sample_seed = 3;
  const std::string echo = R"({"match":"default","response":"benign"})";
  const auto r = RunExperiment3(FiftyEmails(), "fifty", {broken, ScriptedProvider("echo", echo)}, options);
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.runs[0].total(), 10u);
  EXPECT_EQ(r.errors.size(), 1u);
  bool disclosed = false;
  for (const auto& n : r.notes) disclosed |= n.find("sampled 10 of 50") != std::string::npos;
  EXPECT_TRUE(disclosed);
  EXPECT_EQ(SampleIndices(50, 10, 3), SampleIndices(50, 10, 3));
  EXPECT_THROW(SampleIndices(5, 6, 0), Error);
}

}  // namespace
}  // namespace phishbench
