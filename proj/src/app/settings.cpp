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
#include <chrono>
#include <ctime>
#include <iostream>
#include <set>
#include <thread>

#include "json.hpp"
#include "phishbench/app.hpp"
#include "phishbench/corpus.hpp"
#include "phishbench/error.hpp"

namespace phishbench {

const char* const kToolVersion = "0.1.0";

namespace {

struct KeySpec {
  const char* key;
  const char* fallback;  // nullptr: no default
};

using Table = std::vector<KeySpec>;

const Table kTfidfKeys = {{"subject-vocab", "5000"}, {"body-vocab", "20000"}, {"min-df", "2"}};

Table With(Table base, const Table& more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

const std::map<std::string, Table, std::less<>>& Tables() {
  static const std::map<std::string, Table, std::less<>> tables = [] {
    const Table experiment = With({{"datasets", nullptr},
                                   {"data-dir", nullptr},
                                   {"models", "lr,nb,rf,svm,mlp"},
                                   {"seeds", "0,1,2,3,4"},
                                   {"train-ratio", "0.7"},
                                   {"params", nullptr},
                                   {"jobs", "auto"},
                                   {"out", nullptr}},
                                  kTfidfKeys);
    std::map<std::string, Table, std::less<>> t;
    t["ingest"] = {{"dataset", nullptr}, {"in", nullptr}, {"out", nullptr}, {"registry", nullptr}};
    t["generate"] = {{"provider", nullptr},     {"providers", nullptr},   {"country", nullptr},
                     {"companies", "1"},         {"employees", "1"},       {"emails", "10"},
                     {"benign-ratio", "0.5"},    {"temperature", "0.8"},   {"prompts", nullptr},
                     {"jobs", "auto"},           {"out", nullptr}};
    t["train"] = With({{"train", nullptr}, {"model", "lr"}, {"seed", "0"}, {"params", nullptr}, {"out", nullptr}},
                      kTfidfKeys);
    t["predict"] = {{"detector", nullptr}, {"test", nullptr}, {"out", nullptr}};
    t["cross-eval"] = experiment;
    t["all-vs-one"] = With(experiment, {{"holdouts", nullptr}});
    t["llm-eval"] = {{"test", nullptr},     {"test-name", nullptr}, {"providers", nullptr},
                     {"provider", nullptr}, {"sample", nullptr},    {"sample-seed", "0"},
                     {"jobs", "auto"},       {"out", nullptr}};
    t["external-test"] = {{"test", nullptr},      {"test-name", nullptr}, {"detector", nullptr},
                          {"predictions", nullptr}, {"provider", nullptr},  {"providers", nullptr},
                          {"jobs", "auto"},        {"out", nullptr}};
    t["report"] = {{"results", nullptr}, {"out", nullptr}};
    for (auto& [name, table] : t) table.push_back({"log-level", "info"});
    return t;
  }();
  return tables;
}

const std::set<std::string, std::less<>> kPathKeys = {"in",   "out",      "registry", "providers",   "prompts",
                                                      "detector", "test", "predictions", "results", "data-dir"};
// Comma lists whose entries may be name=path.
const std::set<std::string, std::less<>> kNamedPathKeys = {"train", "datasets"};

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string Absolute(const std::string& value, const std::filesystem::path& base) {
  std::filesystem::path p(value);
  if (p.is_relative()) p = base / p;
  return p.lexically_normal().string();
}

std::string ResolvePaths(const std::string& key, const std::string& value, const std::filesystem::path& base) {
  if (kPathKeys.count(key)) return Absolute(value, base);
  if (!kNamedPathKeys.count(key)) return value;
  std::string out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    auto end = value.find(',', pos);
    if (end == std::string::npos) end = value.size();
    std::string item = Trim(std::string_view(value).substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq != std::string::npos) {
      item = item.substr(0, eq) + "=" + Absolute(item.substr(eq + 1), base);
    } else if (key == "train") {
      item = Absolute(item, base);
    }
    if (!out.empty()) out += ',';
    out += item;
  }
  return out;
}

const char* LevelName(LogLevel level) {
  switch (level) {
    case LogLevel::kError: return "error";
    case LogLevel::kWarn: return "warn";
    case LogLevel::kInfo: return "info";
    case LogLevel::kDebug: return "debug";
  }
  return "info";
}

}  // namespace

Settings ParseSettings(std::string_view text, std::string_view origin) {
  Settings out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::string where = std::string(origin) + " line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    Require(eq != std::string::npos, ErrorKind::kConfig, where + "expected key = value");
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    Require(!key.empty() && std::all_of(key.begin(), key.end(),
                                        [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'; }),
            ErrorKind::kConfig, where + "invalid key '" + key + "'");
    Require(out.emplace(key, Trim(std::string_view(line).substr(eq + 1))).second, ErrorKind::kConfig,
            where + "duplicate key '" + key + "'");
  }
  return out;
}

std::string SettingsToText(const Settings& settings) {
  std::string out;
  for (const auto& [k, v] : settings) out += k + " = " + v + "\n";
  return out;
}

const std::vector<std::string>& Commands() {
  static const std::vector<std::string> names = {"ingest",     "generate",   "train",    "predict",       "cross-eval",
                                                 "all-vs-one", "llm-eval",   "external-test", "report"};
  return names;
}

const std::vector<std::string>& CommandKeys(std::string_view command) {
  static const auto keys = [] {
    std::map<std::string, std::vector<std::string>, std::less<>> out;
    for (const auto& [name, table] : Tables()) {
      for (const auto& spec : table) out[name].push_back(spec.key);
    }
    return out;
  }();
  const auto it = keys.find(command);
  Require(it != keys.end(), ErrorKind::kUsage, "unknown command '" + std::string(command) + "'");
  return it->second;
}

bool KnownKey(std::string_view key) {
  if (key == "config" || key == "command") return true;
  for (const auto& [name, table] : Tables()) {
    for (const auto& spec : table) {
      if (key == spec.key) return true;
    }
  }
  return false;
}

Settings ResolveSettings(std::string_view command, const Settings& flags) {
  const auto table = Tables().find(command);
  Require(table != Tables().end(), ErrorKind::kUsage, "unknown command '" + std::string(command) + "'");
  const auto& keys = CommandKeys(command);
  auto reads = [&](const std::string& key) { return std::find(keys.begin(), keys.end(), key) != keys.end(); };

  Settings out;
  for (const auto& spec : table->second) {
    if (spec.fallback) out[spec.key] = spec.fallback;
  }
  const auto cwd = std::filesystem::current_path();
  if (const auto cfg = flags.find("config"); cfg != flags.end()) {
    const auto path = std::filesystem::path(Absolute(cfg->second, cwd));
    Require(std::filesystem::is_regular_file(path), ErrorKind::kConfig, "config file not found: " + path.string());
    for (const auto& [k, v] : ParseSettings(ReadFile(path), path.string())) {
      Require(KnownKey(k), ErrorKind::kConfig, "config file " + path.string() + ": unknown key '" + k + "'");
      if (reads(k)) out[k] = ResolvePaths(k, v, path.parent_path());
    }
  }
  for (const auto& [k, v] : flags) {
    if (k == "config") continue;
    Require(reads(k), ErrorKind::kUsage, "command " + std::string(command) + " does not take '" + k + "'");
    out[k] = ResolvePaths(k, v, cwd);
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.empty() ? out.erase(it) : std::next(it);
  }
  if (out.count("jobs") && out["jobs"] == "auto") {
    out["jobs"] = std::to_string(std::max(1u, std::thread::hardware_concurrency()));
  }
  return out;
}

LogLevel ParseLogLevel(std::string_view name) {
  for (const auto level : {LogLevel::kError, LogLevel::kWarn, LogLevel::kInfo, LogLevel::kDebug}) {
    if (name == LevelName(level)) return level;
  }
  Fail(ErrorKind::kConfig, "unknown log level '" + std::string(name) + "' (error, warn, info, debug)");
}

Logger::Logger() : sink_([](const std::string& line) { std::cerr << line << '\n'; }) {}

void Logger::SetSink(Sink sink) {
  std::lock_guard lock(mutex_);
  sink_ = std::move(sink);
}

void Logger::Event(LogLevel level, std::string_view event, std::string_view fields_json) {
  if (!Enabled(level)) return;
  nlohmann::ordered_json j;
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char ts[64];
  std::snprintf(ts, sizeof ts, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  j["ts"] = ts;
  j["level"] = LevelName(level);
  j["event"] = event;
  const auto fields = nlohmann::ordered_json::parse(fields_json, nullptr, false);
  if (fields.is_object()) {
    for (const auto& [k, v] : fields.items()) j[k] = v;
  }
  const auto line = j.dump();
  std::lock_guard lock(mutex_);
  if (sink_) sink_(line);
}

}  // namespace phishbench
