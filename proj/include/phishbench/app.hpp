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

#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace phishbench {

extern const char* const kToolVersion;

// Run configuration: `key = value` lines, '#' starts a comment. Keys are the
// long flag names of the subcommands. Precedence, lowest first: built-in
// defaults, the file named by `config`, explicit flags.
using Settings = std::map<std::string, std::string>;

Settings ParseSettings(std::string_view text, std::string_view origin = "settings");
std::string SettingsToText(const Settings& settings);

const std::vector<std::string>& Commands();
// Keys a command reads; "config" is accepted everywhere.
const std::vector<std::string>& CommandKeys(std::string_view command);
// Keys any command reads. A config file may carry keys for other commands.
bool KnownKey(std::string_view key);

// Merges the file named by `config` (if any) under `flags` and checks every
// key. The result holds only keys the command reads, plus its defaults.
Settings ResolveSettings(std::string_view command, const Settings& flags);

enum class LogLevel { kError, kWarn, kInfo, kDebug };
LogLevel ParseLogLevel(std::string_view name);

// JSON-lines structured events.
class Logger {
 public:
  using Sink = std::function<void(const std::string&)>;
  Logger();
  void SetLevel(LogLevel level) { level_ = level; }
  void SetSink(Sink sink);
  bool Enabled(LogLevel level) const { return level <= level_; }
  // `fields_json` is a JSON object.
  void Event(LogLevel level, std::string_view event, std::string_view fields_json = "{}");

 private:
  std::mutex mutex_;
  LogLevel level_ = LogLevel::kInfo;
  Sink sink_;
};

struct RunContext {
  std::atomic<bool> cancel{false};
  Logger log;
};

// Runs one subcommand on resolved settings (see ResolveSettings). Every run
// writes a manifest and a config snapshot next to its outputs: manifest.json
// and config.snapshot inside directory outputs, <stem>.manifest.json and
// <stem>.config beside file outputs. Returns a JSON summary of the run.
std::string RunCommand(std::string_view command, const Settings& settings, RunContext& context);

}  // namespace phishbench
