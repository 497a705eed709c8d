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

#include <filesystem>
#include <string>

#include "phishbench/corpus.hpp"

namespace phishbench::testing {

inline EmailRecord MakeRecord(std::string id, std::string subject, std::string body, Label label,
                              Language language = Language::kEn, std::string source = "fixture") {
  EmailRecord r;
  r.id = std::move(id);
  r.subject = std::move(subject);
  r.body = std::move(body);
  r.label = label;
  r.language = language;
  r.source = std::move(source);
  return r;
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("phishbench-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string FixturePath(const std::string& name) { return std::string(PB_FIXTURES) + "/" + name; }

}  // namespace phishbench::testing
