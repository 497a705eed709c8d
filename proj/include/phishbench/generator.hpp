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
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishbench/corpus.hpp"
#include "phishbench/llm.hpp"

namespace phishbench {

// Prompt templates. Placeholders are written {name}; "{{" and "}}" stand for
// literal braces. Rendering fails on an unknown or unbound placeholder.
//
//   system               (none)
//   company              {count} {country}
//   employee             {count} {company}
//   scenario_legitimate  {count} {company} {employee} {traits} {trait_keys}
//   scenario_phishing    same as scenario_legitimate
//   email_legitimate     {company} {employee} {scenario} {language}
//   email_phishing       same as email_legitimate
class PromptSet {
 public:
  static const std::vector<std::string>& Names();
  // Templates compiled into the library.
  static PromptSet Builtin();
  // Reads <name>.txt for every name; missing files fall back to the builtin text.
  static PromptSet Load(const std::filesystem::path& dir);

  const std::string& Text(std::string_view name) const;
  void Set(const std::string& name, std::string text);
  // First 12 hex digits of the SHA-256 of the template text.
  std::string Version(std::string_view name) const;
  std::map<std::string, std::string> Versions() const;

  std::string Render(std::string_view name, const std::map<std::string, std::string>& values) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

std::string RenderTemplate(std::string_view text, const std::map<std::string, std::string>& values);

enum class ScenarioKind { kLegitimate, kPhishing };
const char* ScenarioKindName(ScenarioKind kind);

// Field names, in output order.
const std::vector<std::string>& CompanyFields();
const std::vector<std::string>& EmployeeFields();
const std::vector<std::string>& TraitKeys(ScenarioKind kind);

struct Country {
  std::string code;  // upper case, used in record ids
  std::string name;  // as written in prompts
  Language language = Language::kUnknown;
};

// Accepts codes or English names, case-insensitively: IT/Italy, DE/Germany,
// UK/GB/United Kingdom, US/USA/United States.
Country ResolveCountry(std::string_view text);

using FieldMap = std::vector<std::pair<std::string, std::string>>;

struct CompanyProfile {
  FieldMap fields;  // CompanyFields() order
  std::string ref;  // "<country>-c<i>"
};

struct EmployeeProfile {
  FieldMap fields;  // EmployeeFields() order; age as decimal digits
  std::string ref;  // "<company ref>-e<j>"
};

struct EmailScenario {
  ScenarioKind kind = ScenarioKind::kLegitimate;
  FieldMap traits;  // TraitKeys(kind) order
  std::string ref;  // "<employee ref>-s<k>"
};

struct GeneratedEmail {
  std::string subject;
  std::string body;
  ScenarioKind kind = ScenarioKind::kLegitimate;
  std::string scenario_ref;
  std::string company_ref;
  std::string employee_ref;
  Language language = Language::kUnknown;
  std::size_t slot = 0;  // position among the employee's N emails

  // id "<employee ref>-m<slot>", source "e-phishgen", generated, label from kind.
  EmailRecord ToRecord() const;
};

// Payload validation. Each returns nullopt and sets `reason` on failure.
// Fields may be JSON strings or numbers (numbers are converted); values
// must be non-empty after cleaning. Unknown keys are dropped from profiles
// and rejected in scenarios.
std::optional<CompanyProfile> ValidateCompany(const std::string& json_object, std::string& reason);
std::optional<EmployeeProfile> ValidateEmployee(const std::string& json_object, std::string& reason);
std::optional<EmailScenario> ValidateScenario(ScenarioKind kind, const std::string& json_object,
                                              std::string& reason);

// Extracts the JSON array from a model response: the whole text, or the span
// from the first '[' to the last ']' when the text carries surrounding prose.
// A single object is accepted as a one-element array. Elements come back as
// serialized JSON. nullopt when nothing parses.
std::optional<std::vector<std::string>> ExtractJsonItems(std::string_view response);

// Per-stage slot accounting: requested = produced + discarded + never_attempted.
struct StageAccount {
  std::size_t requested = 0;
  std::size_t produced = 0;
  std::size_t discarded = 0;
  std::size_t never_attempted = 0;
  std::size_t calls = 0;
  // Every rejected payload or failed call, by reason. Top-ups can recover from
  // a rejection, so these may exceed `discarded`.
  std::map<std::string, std::size_t> rejections;

  bool Balanced() const { return requested == produced + discarded + never_attempted; }
  void Merge(const StageAccount& other);
};

struct GenerationConfig {
  std::string country;
  std::size_t companies = 1;            // X
  std::size_t employees = 1;            // Y, per company
  std::size_t emails = 10;              // N, per employee
  double benign_ratio = 0.5;
  double temperature = 0.8;
  std::size_t jobs = 1;                 // concurrent companies

  // Throws kValidation: X, Y, N >= 1, integral N * benign_ratio, known country.
  void Validate() const;
  std::size_t BenignPerEmployee() const;
};

struct GenerationReport {
  GenerationConfig config;
  Country country;
  std::string provider_id;
  std::string model;
  std::map<std::string, std::string> prompt_versions;
  StageAccount companies;
  StageAccount employees;
  StageAccount scenarios;
  StageAccount emails;
  std::size_t produced_benign = 0;
  std::size_t produced_phishing = 0;
  bool aborted = false;
  std::string abort_reason;
  bool cancelled = false;

  std::size_t requested() const { return emails.requested; }
  std::size_t produced() const { return emails.produced; }
  std::string ToJson() const;
};

struct GenerationResult {
  std::vector<CompanyProfile> companies;
  std::vector<EmployeeProfile> employees;
  std::vector<GeneratedEmail> emails;  // company, employee, slot order
  GenerationReport report;

  Corpus ToCorpus() const;
};

class Generator {
 public:
  Generator(LlmClient& client, PromptSet prompts, GenerationConfig config);

  std::vector<CompanyProfile> GenerateCompanies(StageAccount& account);
  std::vector<EmployeeProfile> GenerateEmployees(const CompanyProfile& company, StageAccount& account);
  std::vector<EmailScenario> GenerateScenarios(ScenarioKind kind, std::size_t count,
                                               const CompanyProfile& company,
                                               const EmployeeProfile& employee,
                                               StageAccount& account);
  // nullopt when the email is discarded; the reason is tallied in `account`.
  std::optional<GeneratedEmail> GenerateEmail(const EmailScenario& scenario,
                                              const CompanyProfile& company,
                                              const EmployeeProfile& employee,
                                              StageAccount& account);

  // Companies, then per company its employees, then per employee the
  // legitimate scenarios and their emails followed by the phishing ones.
  // Companies run concurrently (config.jobs) unless the provider is
  // order-sensitive. Setting `cancel` stops before the next company.
  GenerationResult Run(const std::atomic<bool>* cancel = nullptr);

 private:
  std::optional<std::vector<std::string>> Ask(const std::string& user_prompt, StageAccount& account);
  template <typename T, typename ValidateFn>
  std::vector<T> CollectList(const std::string& template_name,
                             std::map<std::string, std::string> values, std::size_t count,
                             StageAccount& account, ValidateFn validate);

  LlmClient& client_;
  PromptSet prompts_;
  GenerationConfig config_;
  Country country_;
};

extern const char* const kStructuredReaskSuffix;

// Runs the pipeline and writes the corpus to `corpus_path` and the report to
// ReportPathFor(corpus_path).
GenerationResult RunPipeline(LlmClient& client, const PromptSet& prompts,
                             const GenerationConfig& config,
                             const std::filesystem::path& corpus_path,
                             const std::atomic<bool>* cancel = nullptr);
std::filesystem::path ReportPathFor(const std::filesystem::path& corpus_path);

}  // namespace phishbench
