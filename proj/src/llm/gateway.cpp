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
#include <cctype>
#include <chrono>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "phishbench/digest.hpp"
#include "phishbench/llm.hpp"
#include "phishbench/rng.hpp"

namespace phishbench {

using json = nlohmann::ordered_json;

const char* ProviderKindName(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAi: return "openai";
    case ProviderKind::kGemini: return "gemini";
    case ProviderKind::kAnthropic: return "anthropic";
    case ProviderKind::kMock: return "mock";
  }
  return "?";
}

ProviderKind ParseProviderKind(std::string_view name) {
  for (const auto k : {ProviderKind::kOpenAi, ProviderKind::kGemini, ProviderKind::kAnthropic,
                       ProviderKind::kMock}) {
    if (name == ProviderKindName(k)) return k;
  }
  Fail(ErrorKind::kConfig, "unknown provider kind '" + std::string(name) + "'");
}

std::string ProviderConfig::CredentialVariable() const {
  std::string name;
  for (const unsigned char c : provider_id) {
    name.push_back(std::isalnum(c) ? static_cast<char>(std::toupper(c)) : '_');
  }
  return name + "_API_KEY";
}

void ProviderConfig::Validate() const {
  Require(!provider_id.empty(), ErrorKind::kConfig, "provider id is empty");
  Require(temperature >= 0.0 && temperature <= 2.0, ErrorKind::kConfig,
          "provider " + provider_id + ": temperature must be in [0, 2]");
  Require(max_retries >= 0, ErrorKind::kConfig, "provider " + provider_id + ": max_retries < 0");
  Require(requests_per_minute >= 0.0, ErrorKind::kConfig,
          "provider " + provider_id + ": requests_per_minute < 0");
  Require(timeout_seconds > 0.0, ErrorKind::kConfig, "provider " + provider_id + ": timeout <= 0");
  Require(kind != ProviderKind::kMock || !mock_script.empty(), ErrorKind::kConfig,
          "mock provider " + provider_id + " needs a script");
}

ProviderRegistry ProviderRegistry::Builtin() {
  ProviderRegistry r;
  ProviderConfig gpt;
  gpt.provider_id = "gpt-4o-mini";
  gpt.kind = ProviderKind::kOpenAi;
  gpt.model = "gpt-4o-mini";
  gpt.requests_per_minute = 500;
  r.Add(gpt);
  ProviderConfig gpt35 = gpt;
  gpt35.provider_id = gpt35.model = "gpt-3.5-turbo";
  r.Add(gpt35);
  ProviderConfig gemini;
  gemini.provider_id = gemini.model = "gemini-2.0-flash";
  gemini.kind = ProviderKind::kGemini;
  gemini.requests_per_minute = 15;
  r.Add(gemini);
  ProviderConfig claude;
  claude.provider_id = "claude-3.5-haiku";
  claude.model = "claude-3-5-haiku-latest";
  claude.kind = ProviderKind::kAnthropic;
  claude.requests_per_minute = 50;
  r.Add(claude);
  return r;
}

ProviderRegistry ProviderRegistry::FromJson(std::string_view text,
                                            const std::filesystem::path& base_dir) {
  ProviderRegistry r;
  try {
    const auto j = json::parse(text);
    Require(j.value("version", 0) == 1, ErrorKind::kConfig, "provider registry version must be 1");
    for (const auto& p : j.at("providers")) {
      ProviderConfig c;
      c.provider_id = p.at("id").get<std::string>();
      c.kind = ParseProviderKind(p.at("kind").get<std::string>());
      c.model = p.value("model", c.provider_id);
      c.endpoint = p.value("endpoint", "");
      c.temperature = p.value("temperature", 0.0);
      c.max_retries = p.value("max_retries", 3);
      c.requests_per_minute = p.value("requests_per_minute", 0.0);
      c.timeout_seconds = p.value("timeout_seconds", 60.0);
      c.seed = p.value("seed", std::uint64_t{0});
      if (p.contains("mock_script")) {
        std::filesystem::path script = p.at("mock_script").get<std::string>();
        c.mock_script = script.is_relative() && !base_dir.empty() ? base_dir / script : script;
      }
      c.Validate();
      r.Add(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kConfig, std::string("malformed provider registry: ") + e.what());
  }
  return r;
}

ProviderRegistry ProviderRegistry::Load(const std::filesystem::path& path) {
  auto base = ProviderRegistry::Builtin();
  const auto extra = FromJson(ReadFile(path), path.parent_path());
  for (const auto& c : extra.providers_) base.Add(c);
  return base;
}

const ProviderConfig& ProviderRegistry::Get(std::string_view id) const {
  for (const auto& p : providers_) {
    if (p.provider_id == id) return p;
  }
  Fail(ErrorKind::kConfig, "unknown provider '" + std::string(id) + "'");
}

bool ProviderRegistry::Contains(std::string_view id) const {
  return std::any_of(providers_.begin(), providers_.end(),
                     [&](const ProviderConfig& p) { return p.provider_id == id; });
}

void ProviderRegistry::Add(ProviderConfig config) {
  if (config.model.empty()) config.model = config.provider_id;
  for (auto& p : providers_) {
    if (p.provider_id == config.provider_id) {
      p = std::move(config);
      return;
    }
  }
  providers_.push_back(std::move(config));
}

std::vector<std::string> ProviderRegistry::Ids() const {
  std::vector<std::string> ids;
  for (const auto& p : providers_) ids.push_back(p.provider_id);
  return ids;
}

std::string ChatRequest::CanonicalText() const {
  json j = json::array();
  for (const auto& m : messages) j.push_back({{"role", m.role}, {"content", m.content}});
  return j.dump();
}

std::string ChatRequest::Hash() const { return Sha256Hex(CanonicalText()); }

std::string ChatExchange::ToJsonLine() const {
  json j;
  j["id"] = id;
  j["provider_id"] = provider_id;
  j["model"] = model;
  j["request"] = {{"messages", json::parse(request.CanonicalText())},
                  {"temperature", request.temperature}};
  j["request_hash"] = request.Hash();
  j["response"] = response;
  j["status"] = status;
  j["latency_ms"] = latency_ms;
  j["attempt_count"] = attempt_count;
  j["ok"] = ok;
  j["error"] = error;
  return j.dump();
}

double SystemClock::Now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void SystemClock::Sleep(double seconds) {
  if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

double VirtualClock::Now() {
  std::lock_guard lock(mutex_);
  return now_;
}

void VirtualClock::Sleep(double seconds) {
  std::lock_guard lock(mutex_);
  if (seconds > 0) now_ += seconds;
}

RateLimiter::RateLimiter(double requests_per_minute, std::shared_ptr<Clock> clock)
    : rpm_(requests_per_minute), clock_(std::move(clock)) {}

void RateLimiter::Acquire() {
  if (rpm_ <= 0) return;
  std::lock_guard lock(mutex_);
  const auto budget = static_cast<std::size_t>(std::max(1.0, std::floor(rpm_)));
  while (true) {
    const double now = clock_->Now();
    while (!stamps_.empty() && stamps_.front() <= now - 60.0) stamps_.pop_front();
    if (stamps_.size() < budget) {
      stamps_.push_back(now);
      return;
    }
    clock_->Sleep(std::max(stamps_.front() + 60.0 - now, 1e-6));
  }
}

ExchangeLog::ExchangeLog(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app | std::ios::binary);
  Require(static_cast<bool>(out_), ErrorKind::kIo, "cannot open exchange log " + path.string());
}

void ExchangeLog::Append(const ChatExchange& exchange) {
  const std::string line = exchange.ToJsonLine() + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
}

LlmClient::LlmClient(ProviderConfig config, std::unique_ptr<Provider> provider,
                     std::shared_ptr<Clock> clock, ExchangeLog* log, BackoffPolicy backoff)
    : config_(std::move(config)),
      provider_(std::move(provider)),
      clock_(std::move(clock)),
      limiter_(config_.requests_per_minute, clock_),
      log_(log),
      backoff_(backoff) {
  config_.Validate();
}

std::unique_ptr<LlmClient> LlmClient::Create(const ProviderConfig& config, ExchangeLog* log) {
  config.Validate();
  if (config.kind == ProviderKind::kMock) {
    auto clock = std::make_shared<VirtualClock>();
    auto provider = MockProvider::FromFile(config.mock_script, clock, config.timeout_seconds);
    return std::make_unique<LlmClient>(config, std::move(provider), clock, log);
  }
  auto provider = std::make_unique<HttpProvider>(config);
  return std::make_unique<LlmClient>(config, std::move(provider), std::make_shared<SystemClock>(),
                                     log);
}

namespace {

bool Retryable(int status) { return status == 0 || status == 429 || status >= 500; }

}  // namespace

ChatExchange LlmClient::Complete(const ChatRequest& request) {
  Require(!request.messages.empty(), ErrorKind::kValidation, "empty prompt");
  ChatExchange ex;
  ex.id = config_.provider_id + "-" + std::to_string(sequence_.fetch_add(1));
  ex.provider_id = config_.provider_id;
  ex.model = config_.model;
  ex.request = request;
  // Jitter depends only on the request, so concurrent calls stay repeatable.
  Rng jitter(DeriveSeed(config_.seed, HashName(request.CanonicalText())));
  const double start = clock_->Now();
  const int max_attempts = 1 + config_.max_retries;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    limiter_.Acquire();
    const RawResponse raw = provider_->Send(request);
    ex.attempt_count = attempt;
    ex.status = raw.status;
    if (raw.status >= 200 && raw.status < 300) {
      ex.ok = true;
      ex.response = raw.text;
      ex.error.clear();
      break;
    }
    ex.error = raw.error.empty() ? "HTTP status " + std::to_string(raw.status) : raw.error;
    if (!Retryable(raw.status) || attempt == max_attempts) break;
    const double delay = backoff_.base_seconds * std::pow(backoff_.factor, attempt - 1);
    clock_->Sleep(delay * (1.0 + backoff_.jitter_fraction * jitter.Uniform()));
  }
  ex.latency_ms = (clock_->Now() - start) * 1000.0;
  if (log_ != nullptr) log_->Append(ex);
  if (!ex.ok) {
    throw TransportError("provider " + config_.provider_id + " failed after " +
                             std::to_string(ex.attempt_count) + " attempt(s); last status " +
                             std::to_string(ex.status) + ": " + ex.error,
                         ex);
  }
  return ex;
}

}  // namespace phishbench
