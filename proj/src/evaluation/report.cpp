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

#include <array>
#include <cstdio>
#include <map>
#include <tuple>

#include "json.hpp"
#include "phishbench/evaluation.hpp"

namespace phishbench {

using nlohmann::ordered_json;

namespace {

constexpr const char* kResultsFormat = "phishbench-results";
constexpr const char* kSplitScheme =
    "stratified per class; indices shuffled by Rng(DeriveSeed(seed, class)), class 0 phishing, 1 benign; "
    "test = round_half_up((1 - ratio) * n), at least 1";

using CellKey = std::tuple<std::string, std::string, std::string, std::string>;

CellKey KeyOf(const MetricsReport& m) { return {m.group, m.model_id, m.train_source, m.test_source}; }

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<double> F1Where(const ResultSet& results, const std::string& group, const std::string& model,
                            bool diagonal_only) {
  std::vector<double> out;
  for (const auto& r : results.runs) {
    if (r.group != group || r.model_id != model) continue;
    if (diagonal_only && r.train_source != r.test_source) continue;
    out.push_back(r.f1);
  }
  return out;
}

ordered_json SummaryJson(const Summary& s) { return {{"n", s.n}, {"mean", s.mean}, {"std", s.std}}; }

ordered_json CellJson(const CellSummary& c) {
  ordered_json j;
  j["kind"] = "cell";
  j["group"] = c.group;
  j["model"] = c.model_id;
  j["train"] = c.train_source;
  j["test"] = c.test_source;
  j["n"] = c.f1.n;
  j["f1_mean"] = c.f1.mean;
  j["f1_std"] = c.f1.std;
  j["precision_mean"] = c.precision.mean;
  j["precision_std"] = c.precision.std;
  j["recall_mean"] = c.recall.mean;
  j["recall_std"] = c.recall.std;
  j["accuracy_mean"] = c.accuracy.mean;
  j["accuracy_std"] = c.accuracy.std;
  j["invalid"] = c.invalid_count;
  return j;
}

ordered_json ComparisonJson(const Comparison& c) {
  ordered_json j;
  j["a"] = c.label_a;
  j["b"] = c.label_b;
  j["sample_a"] = SummaryJson(c.a);
  j["sample_b"] = SummaryJson(c.b);
  j["test"] = "welch two-sided";
  if (c.test) {
    j["t"] = c.test->t_statistic;
    j["df"] = c.test->degrees_of_freedom;
    j["p"] = c.test->p_value;
    const bool below = c.test->p_value < 0.05;
    j["difference_test_reading"] = below ? "difference at alpha 0.05" : "no difference at alpha 0.05 (equivalent)";
    j["p_below_0_05_reading"] = below ? "equivalent under the p < .05 reading" : "not equivalent under the p < .05 reading";
  } else {
    j["error"] = c.error;
  }
  return j;
}

template <typename T>
ordered_json OptionalJson(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::vector<CellSummary> SummarizeCells(const ResultSet& results) {
  std::vector<CellSummary> cells;
  std::map<CellKey, std::size_t> index;
  std::vector<std::array<std::vector<double>, 4>> values;
  for (const auto& r : results.runs) {
    const auto key = KeyOf(r);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      CellSummary c;
      c.group = r.group;
      c.model_id = r.model_id;
      c.train_source = r.train_source;
      c.test_source = r.test_source;
      cells.push_back(std::move(c));
      values.emplace_back();
    }
    auto& v = values[it->second];
    v[0].push_back(r.f1);
    v[1].push_back(r.precision);
    v[2].push_back(r.recall);
    v[3].push_back(r.accuracy);
    cells[it->second].invalid_count += r.invalid_count;
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i].f1 = Summarize(values[i][0]);
    cells[i].precision = Summarize(values[i][1]);
    cells[i].recall = Summarize(values[i][2]);
    cells[i].accuracy = Summarize(values[i][3]);
  }
  return cells;
}

CrossEvalMatrix BuildMatrix(const ResultSet& results, std::string_view model_id) {
  CrossEvalMatrix m;
  m.model_id = std::string(model_id);
  m.datasets = results.datasets;
  const std::size_t n = m.datasets.size();
  m.cells.assign(n, std::vector<std::optional<CellSummary>>(n));
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) position[m.datasets[i]] = i;
  for (auto& c : SummarizeCells(results)) {
    if (c.group != "cross" || c.model_id != model_id) continue;
    const auto row = position.find(c.train_source);
    const auto col = position.find(c.test_source);
    if (row == position.end() || col == position.end()) continue;
    m.cells[row->second][col->second] = std::move(c);
  }
  m.avg_drop.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.cells[i][i]) continue;
    const double diagonal = m.cells[i][i]->f1.mean;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !m.cells[i][j]) continue;
      sum += diagonal - m.cells[i][j]->f1.mean;
      ++count;
    }
    if (count > 0) m.avg_drop[i] = sum / static_cast<double>(count);
  }
  return m;
}

std::vector<Comparison> StandardComparisons(const ResultSet& results) {
  std::vector<Comparison> out;
  const bool cross = results.experiment == "cross-eval";
  const bool avo = results.experiment == "all-vs-one";
  if (!cross && !avo) return out;
  const std::string group = cross ? "cross" : "holdout";
  for (std::size_t i = 0; i < results.models.size(); ++i) {
    for (std::size_t j = i + 1; j < results.models.size(); ++j) {
      const auto a = F1Where(results, group, results.models[i], cross);
      const auto b = F1Where(results, group, results.models[j], cross);
      out.push_back(Compare(results.models[i] + " " + group, a, results.models[j] + " " + group, b));
    }
  }
  if (avo) {
    for (const auto& model : results.models) {
      const auto single = F1Where(results, "single", model, false);
      const auto constituent = F1Where(results, "constituent", model, false);
      out.push_back(Compare(model + " single", single, model + " all-vs-one", constituent));
    }
  }
  return out;
}

std::string ResultsToJsonl(const ResultSet& results) {
  ordered_json header;
  header["kind"] = "header";
  header["format"] = kResultsFormat;
  header["version"] = 1;
  header["experiment"] = results.experiment;
  header["datasets"] = results.datasets;
  header["models"] = results.models;
  header["seeds"] = results.seeds;
  header["train_ratio"] = results.train_ratio;
  header["split"] = kSplitScheme;
  header["partial"] = results.partial;
  header["notes"] = results.notes;
  std::string out = header.dump() + "\n";
  for (const auto& r : results.runs) {
    ordered_json j;
    j["kind"] = "run";
    j["group"] = r.group;
    j["model"] = r.model_id;
    j["train"] = r.train_source;
    j["test"] = r.test_source;
    j["seed"] = r.seed;
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["tn"] = r.tn;
    j["fn"] = r.fn;
    j["invalid"] = r.invalid_count;
    j["accuracy"] = r.accuracy;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    out += j.dump() + "\n";
  }
  for (const auto& e : results.errors) {
    ordered_json j;
    j["kind"] = "error";
    j["model"] = e.model_id;
    j["train"] = e.train_source;
    j["test"] = e.test_source;
    j["seed"] = e.seed;
    j["message"] = e.message;
    out += j.dump() + "\n";
  }
  for (const auto& c : SummarizeCells(results)) out += CellJson(c).dump() + "\n";
  return out;
}

ResultSet ResultsFromJsonl(std::string_view text) {
  ResultSet results;
  bool have_header = false;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "results line " + std::to_string(line_no) + ": ";
    try {
      const auto j = ordered_json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        Require(!have_header, ErrorKind::kValidation, where + "second header");
        Require(j.at("format") == kResultsFormat && j.at("version") == 1, ErrorKind::kValidation,
                where + "not a results file of version 1");
        results.experiment = j.at("experiment").get<std::string>();
        results.datasets = j.at("datasets").get<std::vector<std::string>>();
        results.models = j.at("models").get<std::vector<std::string>>();
        results.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        results.train_ratio = j.at("train_ratio").get<double>();
        results.partial = j.at("partial").get<bool>();
        results.notes = j.at("notes").get<std::vector<std::string>>();
        have_header = true;
        continue;
      }
      Require(have_header, ErrorKind::kValidation, where + "missing header");
      if (kind == "run") {
        MetricsReport m = MetricsFromCounts(j.at("tp").get<std::size_t>(), j.at("fp").get<std::size_t>(),
                                            j.at("tn").get<std::size_t>(), j.at("fn").get<std::size_t>());
        m.invalid_count = j.at("invalid").get<std::size_t>();
        m.group = j.at("group").get<std::string>();
        m.model_id = j.at("model").get<std::string>();
        m.train_source = j.at("train").get<std::string>();
        m.test_source = j.at("test").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        results.runs.push_back(std::move(m));
      } else if (kind == "error") {
        results.errors.push_back({j.at("model").get<std::string>(), j.at("train").get<std::string>(),
                                  j.at("test").get<std::string>(), j.at("seed").get<std::uint64_t>(),
                                  j.at("message").get<std::string>()});
      } else if (kind != "cell") {
        Fail(ErrorKind::kValidation, where + "unknown kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorKind::kValidation, where + e.what());
    }
  }
  Require(have_header, ErrorKind::kValidation, "results file has no header");
  return results;
}

void ExportReport(const ResultSet& results, const std::filesystem::path& dir) {
  Require(!results.runs.empty(), ErrorKind::kValidation, "refusing to export empty results");
  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / "results.jsonl", ResultsToJsonl(results));

  const auto cells = SummarizeCells(results);
  ordered_json summary;
  summary["format"] = "phishbench-summary";
  summary["version"] = 1;
  summary["experiment"] = results.experiment;
  summary["partial"] = results.partial;
  summary["notes"] = results.notes;
  summary["errors"] = results.errors.size();
  ordered_json cell_list = ordered_json::array();
  for (const auto& c : cells) {
    auto j = CellJson(c);
    j.erase("kind");
    cell_list.push_back(std::move(j));
  }
  summary["cells"] = cell_list;

  std::string plot = "group,model,train,test,n,f1_mean,f1_std,precision_mean,recall_mean,accuracy_mean,invalid\n";
  for (const auto& c : cells) {
    plot += CsvField(c.group) + "," + CsvField(c.model_id) + "," + CsvField(c.train_source) + "," +
            CsvField(c.test_source) + "," + std::to_string(c.f1.n) + "," + Fixed(c.f1.mean) + "," +
            Fixed(c.f1.std) + "," + Fixed(c.precision.mean) + "," + Fixed(c.recall.mean) + "," +
            Fixed(c.accuracy.mean) + "," + std::to_string(c.invalid_count) + "\n";
  }
  WriteFileAtomic(dir / "plot.csv", plot);

  if (results.experiment == "cross-eval") {
    ordered_json matrices;
    for (const auto& model : results.models) {
      const auto m = BuildMatrix(results, model);
      std::string csv = "train";
      for (const auto& d : m.datasets) csv += "," + CsvField(d);
      csv += ",avg_drop\n";
      ordered_json drops;
      ordered_json holes = ordered_json::array();
      for (std::size_t i = 0; i < m.datasets.size(); ++i) {
        csv += CsvField(m.datasets[i]);
        for (std::size_t j = 0; j < m.datasets.size(); ++j) {
          csv += ",";
          if (m.cells[i][j]) {
            csv += Fixed(m.cells[i][j]->f1.mean);
          } else {
            holes.push_back({m.datasets[i], m.datasets[j]});
          }
        }
        csv += "," + (m.avg_drop[i] ? Fixed(*m.avg_drop[i]) : std::string()) + "\n";
        drops[m.datasets[i]] = OptionalJson(m.avg_drop[i]);
      }
      WriteFileAtomic(dir / ("matrix_" + model + ".csv"), csv);
      matrices[model] = {{"avg_drop", drops}, {"holes", holes}};
    }
    summary["matrices"] = matrices;
  }

  if (results.experiment == "all-vs-one") {
    ordered_json table;
    std::string same = "model,single_f1,all_vs_one_f1\n";
    for (const auto& model : results.models) {
      std::string csv = "holdout,n,f1_mean,f1_std,precision_mean,recall_mean\n";
      for (const auto& c : cells) {
        if (c.group != "holdout" || c.model_id != model) continue;
        csv += CsvField(c.test_source) + "," + std::to_string(c.f1.n) + "," + Fixed(c.f1.mean) + "," +
               Fixed(c.f1.std) + "," + Fixed(c.precision.mean) + "," + Fixed(c.recall.mean) + "\n";
      }
      WriteFileAtomic(dir / ("all_vs_one_" + model + ".csv"), csv);
      const auto single = Summarize(F1Where(results, "single", model, false));
      const auto avo = Summarize(F1Where(results, "constituent", model, false));
      table[model] = {{"single", SummaryJson(single)}, {"all_vs_one", SummaryJson(avo)}};
      same += CsvField(model) + "," + Fixed(single.mean) + "," + Fixed(avo.mean) + "\n";
    }
    WriteFileAtomic(dir / "single_vs_all_vs_one.csv", same);
    summary["single_vs_all_vs_one"] = table;
  }

  ordered_json comparisons = ordered_json::array();
  for (const auto& c : StandardComparisons(results)) comparisons.push_back(ComparisonJson(c));
  summary["comparisons"] = comparisons;
  WriteFileAtomic(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace phishbench
