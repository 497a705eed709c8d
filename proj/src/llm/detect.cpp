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

#include "phishbench/digest.hpp"
#include "phishbench/llm.hpp"

namespace phishbench {

const char* const kDetectionSystemPrompt = "You are an email security analyst.";
const char* const kDetectionUserTemplate =
    "Classify the following email as exactly one word, 'phishing' or 'benign'. "
    "Subject: {subject} Body: {body}";
const char* const kDetectionReaskSuffix =
    "\n\nYour previous answer could not be parsed. Reply with exactly one word: phishing or benign.";

const char* VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPhishing: return "phishing";
    case Verdict::kBenign: return "benign";
    case Verdict::kInvalid: return "invalid";
  }
  return "?";
}

std::string DetectionPromptVersion() {
  return Sha256Hex(std::string(kDetectionSystemPrompt) + "\n" + kDetectionUserTemplate + "\n" +
                   kDetectionReaskSuffix)
      .substr(0, 12);
}

ChatRequest RenderDetectionRequest(const EmailRecord& record, bool reask, double temperature) {
  // Substitute body last so braces inside the subject are never re-expanded.
  std::string user = kDetectionUserTemplate;
  const auto subject_at = user.find("{subject}");
  const auto body_at = user.find("{body}");
  user = user.substr(0, subject_at) + record.subject +
         user.substr(subject_at + 9, body_at - subject_at - 9) + record.body +
         user.substr(body_at + 6);
  if (reask) user += kDetectionReaskSuffix;
  ChatRequest r;
  r.messages = {{"system", kDetectionSystemPrompt}, {"user", std::move(user)}};
  r.temperature = temperature;
  return r;
}

std::optional<Label> ParseVerdict(std::string_view response) {
  std::string lower(response);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const bool phishing = lower.find("phishing") != std::string::npos;
  const bool benign = lower.find("benign") != std::string::npos ||
                      lower.find("legitimate") != std::string::npos;
  if (phishing == benign) return std::nullopt;
  return phishing ? Label::kPhishing : Label::kBenign;
}

DetectionVerdict ClassifyEmail(LlmClient& client, const EmailRecord& record) {
  DetectionVerdict verdict;
  for (int round = 0; round < 2; ++round) {
    ++verdict.calls;
    ChatExchange ex;
    try {
      ex = client.Complete(RenderDetectionRequest(record, round == 1, client.config().temperature));
    } catch (const TransportError& e) {
      verdict.label = Verdict::kInvalid;
      verdict.exchange_id = e.exchange().id;
      verdict.cause = std::string("transport: ") + e.what();
      return verdict;
    }
    verdict.exchange_id = ex.id;
    if (const auto label = ParseVerdict(ex.response)) {
      verdict.label = *label == Label::kPhishing ? Verdict::kPhishing : Verdict::kBenign;
      verdict.cause.clear();
      return verdict;
    }
    verdict.cause = "unparseable response";
  }
  verdict.label = Verdict::kInvalid;
  return verdict;
}

}  // namespace phishbench
