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
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishbench/corpus.hpp"
#include "phishbench/error.hpp"

namespace phishbench {

enum class ProviderKind { kOpenAi, kGemini, kAnthropic, kMock };

const char* ProviderKindName(ProviderKind kind);
ProviderKind ParseProviderKind(std::string_view name);

struct ProviderConfig {
  std::string provider_id;  // e.g. "gpt-4o-mini"
  ProviderKind kind = ProviderKind::kMock;
  std::string model;     // wire model name; defaults to provider_id
  std::string endpoint;  // scheme://host[:port][/prefix]; empty selects the public default
  double temperature = 0.0;
  int max_retries = 3;
  double requests_per_minute = 0.0;  // 0 disables the budget
  double timeout_seconds = 60.0;
  std::uint64_t seed = 0;          // backoff jitter
  std::filesystem::path mock_script;  // mock providers only

  // "<PROVIDER_ID>_API_KEY": upper-cased, every non-alphanumeric as '_'.
  std::string CredentialVariable() const;
  void Validate() const;
};

// Provider registry document:
//   {"version": 1, "providers": [{"id": ..., "kind": "openai"|"gemini"|"anthropic"|"mock",
//     "model": ..., "endpoint": ..., "requests_per_minute": ..., "max_retries": ...,
//     "timeout_seconds": ..., "mock_script": ...}]}
class ProviderRegistry {
 public:
  static ProviderRegistry Builtin();
  static ProviderRegistry FromJson(std::string_view text, const std::filesystem::path& base_dir = {});
  static ProviderRegistry Load(const std::filesystem::path& path);

  const ProviderConfig& Get(std::string_view id) const;
  bool Contains(std::string_view id) const;
  void Add(ProviderConfig config);
  std::vector<std::string> Ids() const;

 private:
  std::vector<ProviderConfig> providers_;
};

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;

  // Canonical text used for hashing and logging.
  std::string CanonicalText() const;
  std::string Hash() const;  // SHA-256 hex of CanonicalText()
};

struct ChatExchange {
  std::string id;
  std::string provider_id;
  std::string model;
  ChatRequest request;
  std::string response;
  int status = 0;  // last HTTP status; 0 for transport failure or timeout
  double latency_ms = 0.0;
  int attempt_count = 0;
  bool ok = false;
  std::string error;

  // One JSON object; never contains credentials.
  std::string ToJsonLine() const;
};

// Thrown once retries are exhausted (or on a non-retryable status).
class TransportError : public Error {
 public:
  TransportError(const std::string& message, ChatExchange exchange)
      : Error(ErrorKind::kTransport, message), exchange_(std::move(exchange)) {}
  const ChatExchange& exchange() const { return exchange_; }

 private:
  ChatExchange exchange_;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual double Now() = 0;  // seconds
  virtual void Sleep(double seconds) = 0;
};

class SystemClock : public Clock {
 public:
  double Now() override;
  void Sleep(double seconds) override;
};

// Sleeping advances time instantly.
class VirtualClock : public Clock {
 public:
  double Now() override;
  void Sleep(double seconds) override;

 private:
  std::mutex mutex_;
  double now_ = 0.0;
};

// At most `requests_per_minute` acquisitions in any half-open 60 s window.
class RateLimiter {
 public:
  RateLimiter(double requests_per_minute, std::shared_ptr<Clock> clock);
  void Acquire();

 private:
  double rpm_;
  std::shared_ptr<Clock> clock_;
  std::mutex mutex_;
  std::deque<double> stamps_;
};

struct RawResponse {
  int status = 0;  // 0: transport failure / timeout
  std::string text;
  std::string error;
};

// One attempt against a provider. Implementations are thread-safe.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual RawResponse Send(const ChatRequest& request) = 0;
  // True when responses depend on call order (sequence-indexed scripts).
  virtual bool order_sensitive() const { return false; }
};

// Mock script: one JSON object per line; blank lines and lines starting
// with '#' are ignored. Rules:
//   {"match": "index", "index": 3, ...}        the 4th call (0-based, every attempt counts)
//   {"match": "hash", "hash": "<sha256>", ...}  request hash (ChatRequest::Hash)
//   {"match": "contains", "text": "...", ...}   substring of the canonical request
//   {"match": "default", ...}
// Each rule carries "response": text, and optionally "status" (default 200;
// 0 simulates a transport failure) and "delay_ms" (simulated latency; a delay
// beyond the timeout is a timeout). Precedence: index, hash, contains in file
// order, default. No match is a transport failure.
class MockProvider : public Provider {
 public:
  MockProvider(std::string_view script, std::shared_ptr<Clock> clock, double timeout_seconds);
  static std::unique_ptr<MockProvider> FromFile(const std::filesystem::path& path,
                                                std::shared_ptr<Clock> clock,
                                                double timeout_seconds);

  RawResponse Send(const ChatRequest& request) override;
  bool order_sensitive() const override { return !by_index_.empty(); }
  std::size_t calls() const { return calls_; }

 private:
  struct Rule {
    std::string response;
    int status = 200;
    double delay_ms = 0.0;
    std::string text;  // contains rules
  };

  std::shared_ptr<Clock> clock_;
  double timeout_seconds_;
  std::map<std::size_t, Rule> by_index_;
  std::map<std::string, Rule> by_hash_;
  std::vector<Rule> contains_;
  std::optional<Rule> default_;
  std::mutex mutex_;
  std::size_t calls_ = 0;
};

// Chat-completion endpoints over HTTP(S): OpenAI chat/completions, Gemini
// generateContent and Anthropic messages wire formats.
class HttpProvider : public Provider {
 public:
  // Reads the credential from the environment; a missing or empty variable
  // is a configuration error raised here, before any request.
  explicit HttpProvider(const ProviderConfig& config);
  RawResponse Send(const ChatRequest& request) override;

 private:
  ProviderConfig config_;
  std::string credential_;
  std::string base_;    // scheme://host:port
  std::string prefix_;  // path prefix
};

// Append-only line-delimited exchange log with serialized writes.
class ExchangeLog {
 public:
  explicit ExchangeLog(const std::filesystem::path& path);
  void Append(const ChatExchange& exchange);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

struct BackoffPolicy {
  double base_seconds = 1.0;
  double factor = 2.0;
  double jitter_fraction = 0.25;  // delay * (1 + U[0, jitter_fraction))
};

class LlmClient {
 public:
  LlmClient(ProviderConfig config, std::unique_ptr<Provider> provider, std::shared_ptr<Clock> clock,
            ExchangeLog* log = nullptr, BackoffPolicy backoff = {});

  // Builds the provider for `config` (mock script or HTTP adapter). Mock
  // providers run on a virtual clock so results are exactly repeatable.
  static std::unique_ptr<LlmClient> Create(const ProviderConfig& config, ExchangeLog* log = nullptr);

  // Retries transport failures, 429 and 5xx with exponential backoff up to
  // max_retries; throws TransportError when they are exhausted.
  ChatExchange Complete(const ChatRequest& request);

  const ProviderConfig& config() const { return config_; }
  bool order_sensitive() const { return provider_->order_sensitive(); }

 private:
  ProviderConfig config_;
  std::unique_ptr<Provider> provider_;
  std::shared_ptr<Clock> clock_;
  RateLimiter limiter_;
  ExchangeLog* log_;
  BackoffPolicy backoff_;
  std::atomic<std::uint64_t> sequence_{0};
};

// Zero-shot detection.
enum class Verdict { kPhishing, kBenign, kInvalid };
const char* VerdictName(Verdict verdict);

struct DetectionVerdict {
  Verdict label = Verdict::kInvalid;
  std::string exchange_id;  // last exchange
  int calls = 0;            // logical calls (1, or 2 after a re-ask)
  std::string cause;        // set for invalid verdicts
};

extern const char* const kDetectionSystemPrompt;
extern const char* const kDetectionUserTemplate;  // {subject} and {body} placeholders
extern const char* const kDetectionReaskSuffix;
// Short hash identifying the detection prompt text.
std::string DetectionPromptVersion();

ChatRequest RenderDetectionRequest(const EmailRecord& record, bool reask, double temperature);

// First case-insensitive occurrence of "phishing" or "benign"/"legitimate";
// nullopt when both classes or neither appear.
std::optional<Label> ParseVerdict(std::string_view response);

DetectionVerdict ClassifyEmail(LlmClient& client, const EmailRecord& record);

}  // namespace phishbench
