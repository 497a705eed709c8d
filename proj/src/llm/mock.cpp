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
#include <sstream>

#include "json.hpp"
#include "phishbench/llm.hpp"

namespace phishbench {

MockProvider::MockProvider(std::string_view script, std::shared_ptr<Clock> clock,
                           double timeout_seconds)
    : clock_(std::move(clock)), timeout_seconds_(timeout_seconds) {
  std::istringstream in{std::string(script)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto where = "mock script line " + std::to_string(line_number) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      Rule rule;
      rule.response = j.value("response", "");
      rule.status = j.value("status", 200);
      rule.delay_ms = j.value("delay_ms", 0.0);
      const auto match = j.at("match").get<std::string>();
      if (match == "index") {
        by_index_[j.at("index").get<std::size_t>()] = rule;
      } else if (match == "hash") {
        by_hash_[j.at("hash").get<std::string>()] = rule;
      } else if (match == "contains") {
        rule.text = j.at("text").get<std::string>();
        contains_.push_back(rule);
      } else if (match == "default") {
        default_ = rule;
      } else {
        Fail(ErrorKind::kConfig, where + "unknown match kind '" + match + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorKind::kConfig, where + e.what());
    }
  }
}

std::unique_ptr<MockProvider> MockProvider::FromFile(const std::filesystem::path& path,
                                                     std::shared_ptr<Clock> clock,
                                                     double timeout_seconds) {
  return std::make_unique<MockProvider>(ReadFile(path), std::move(clock), timeout_seconds);
}

RawResponse MockProvider::Send(const ChatRequest& request) {
  const Rule* rule = nullptr;
  {
    std::lock_guard lock(mutex_);
    const std::size_t index = calls_++;
    if (const auto it = by_index_.find(index); it != by_index_.end()) rule = &it->second;
  }
  if (rule == nullptr && !by_hash_.empty()) {
    if (const auto it = by_hash_.find(request.Hash()); it != by_hash_.end()) rule = &it->second;
  }
  if (rule == nullptr && !contains_.empty()) {
    const auto text = request.CanonicalText();
    for (const auto& r : contains_) {
      if (text.find(r.text) != std::string::npos ||
          std::any_of(request.messages.begin(), request.messages.end(),
                      [&](const ChatMessage& m) { return m.content.find(r.text) != std::string::npos; })) {
        rule = &r;
        break;
      }
    }
  }
  if (rule == nullptr && default_) rule = &*default_;
  if (rule == nullptr) return {0, "", "mock script has no response for this request"};
  if (rule->delay_ms / 1000.0 > timeout_seconds_) {
    clock_->Sleep(timeout_seconds_);
    return {0, "", "timeout"};
  }
  clock_->Sleep(rule->delay_ms / 1000.0);
  return {rule->status, rule->response,
          rule->status == 0 ? "simulated transport failure" : std::string()};
}

}  // namespace phishbench
