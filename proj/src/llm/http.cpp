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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"
#include "phishbench/llm.hpp"

#include <cstdlib>

namespace phishbench {

using json = nlohmann::json;

namespace {

std::string DefaultEndpoint(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAi: return "https://api.openai.com";
    case ProviderKind::kGemini: return "https://generativelanguage.googleapis.com";
    case ProviderKind::kAnthropic: return "https://api.anthropic.com";
    case ProviderKind::kMock: break;
  }
  return "";
}

std::string SystemText(const ChatRequest& r) {
  std::string s;
  for (const auto& m : r.messages) {
    if (m.role == "system") s += (s.empty() ? "" : "\n") + m.content;
  }
  return s;
}

}  // namespace

HttpProvider::HttpProvider(const ProviderConfig& config) : config_(config) {
  Require(config_.kind != ProviderKind::kMock, ErrorKind::kConfig,
          "HTTP adapter cannot serve a mock provider");
  const std::string var = config_.CredentialVariable();
  const char* value = std::getenv(var.c_str());
  Require(value != nullptr && *value != '\0', ErrorKind::kConfig,
          "missing credential for provider " + config_.provider_id + ": set " + var);
  credential_ = value;
  const std::string endpoint = config_.endpoint.empty() ? DefaultEndpoint(config_.kind) : config_.endpoint;
  const auto scheme = endpoint.find("://");
  Require(scheme != std::string::npos, ErrorKind::kConfig, "endpoint must include a scheme: " + endpoint);
  const auto slash = endpoint.find('/', scheme + 3);
  base_ = endpoint.substr(0, slash);
  prefix_ = slash == std::string::npos ? "" : endpoint.substr(slash);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

RawResponse HttpProvider::Send(const ChatRequest& request) {
  httplib::Client client(base_);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  json body;
  std::string path;
  switch (config_.kind) {
    case ProviderKind::kOpenAi: {
      path = prefix_ + "/v1/chat/completions";
      headers.emplace("Authorization", "Bearer " + credential_);
      body["model"] = config_.model;
      body["messages"] = json::array();
      for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
      body["temperature"] = request.temperature;
      break;
    }
    case ProviderKind::kAnthropic: {
      path = prefix_ + "/v1/messages";
      headers.emplace("x-api-key", credential_);
      headers.emplace("anthropic-version", "2023-06-01");
      body["model"] = config_.model;
      body["max_tokens"] = 1024;
      const auto system = SystemText(request);
      if (!system.empty()) body["system"] = system;
      body["messages"] = json::array();
      for (const auto& m : request.messages) {
        if (m.role != "system") body["messages"].push_back({{"role", m.role}, {"content", m.content}});
      }
      body["temperature"] = request.temperature;
      break;
    }
    case ProviderKind::kGemini: {
      path = prefix_ + "/v1beta/models/" + config_.model + ":generateContent";
      headers.emplace("x-goog-api-key", credential_);
      const auto system = SystemText(request);
      if (!system.empty()) body["systemInstruction"] = {{"parts", {{{"text", system}}}}};
      body["contents"] = json::array();
      for (const auto& m : request.messages) {
        if (m.role == "system") continue;
        body["contents"].push_back(
            {{"role", m.role == "assistant" ? "model" : "user"}, {"parts", {{{"text", m.content}}}}});
      }
      body["generationConfig"] = {{"temperature", request.temperature}};
      break;
    }
    case ProviderKind::kMock:
      return {0, "", "not an HTTP provider"};
  }

  const auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) return {0, "", "transport failure: " + httplib::to_string(res.error())};
  if (res->status < 200 || res->status >= 300) {
    return {res->status, "", "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200)};
  }
  try {
    const auto j = json::parse(res->body);
    std::string text;
    switch (config_.kind) {
      case ProviderKind::kOpenAi:
        text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        break;
      case ProviderKind::kAnthropic:
        for (const auto& part : j.at("content")) {
          if (part.value("type", "text") == "text") text += part.at("text").get<std::string>();
        }
        break;
      case ProviderKind::kGemini:
        for (const auto& part : j.at("candidates").at(0).at("content").at("parts")) {
          text += part.value("text", "");
        }
        break;
      case ProviderKind::kMock:
        break;
    }
    return {res->status, text, ""};
  } catch (const json::exception& e) {
    return {0, "", std::string("unparseable response body: ") + e.what()};
  }
}

}  // namespace phishbench
