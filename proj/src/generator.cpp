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

#include "phishbench/generator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "json.hpp"
#include "phishbench/digest.hpp"
#include "phishbench/pool.hpp"
#include "phishbench/text.hpp"

namespace phishbench {

using nlohmann::ordered_json;

const char* const kStructuredReaskSuffix =
    "Your previous answer could not be parsed. Respond with valid structured data only.";

namespace {

const std::map<std::string, std::string, std::less<>>& BuiltinTemplates() {
  static const std::map<std::string, std::string, std::less<>> templates = {
#include "builtin_prompts.inc"
  };
  return templates;
}

const std::map<std::string, std::vector<std::string>, std::less<>>& Placeholders() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> placeholders = {
      {"system", {}},
      {"company", {"count", "country"}},
      {"employee", {"count", "company"}},
      {"scenario_legitimate", {"count", "company", "employee", "traits", "trait_keys"}},
      {"scenario_phishing", {"count", "company", "employee", "traits", "trait_keys"}},
      {"email_legitimate", {"company", "employee", "scenario", "language"}},
      {"email_phishing", {"company", "employee", "scenario", "language"}},
  };
  return placeholders;
}

std::string TrimTrailing(std::string text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  return text;
}

// Rendering every declared placeholder as empty text catches unknown names
// and stray braces when a template is installed.
void CheckTemplate(const std::string& name, const std::string& text) {
  const auto it = Placeholders().find(name);
  Require(it != Placeholders().end(), ErrorKind::kValidation, "unknown prompt template '" + name + "'");
  std::map<std::string, std::string> values;
  for (const auto& p : it->second) values[p] = "";
  try {
    RenderTemplate(text, values);
  } catch (const Error& e) {
    Fail(ErrorKind::kValidation, "prompt template '" + name + "': " + e.what());
  }
}

std::string Lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Scalar JSON value as cleaned text; nullopt for objects, arrays, null and booleans.
std::optional<std::string> ScalarText(const ordered_json& v) {
  if (v.is_string()) return CleanText(v.get<std::string>());
  if (v.is_number()) return v.dump();
  return std::nullopt;
}

std::optional<ordered_json> ParseObject(const std::string& json_object, std::string& reason) {
  ordered_json j = ordered_json::parse(json_object, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    reason = "not an object";
    return std::nullopt;
  }
  return j;
}

std::optional<FieldMap> RequiredFields(const ordered_json& j, const std::vector<std::string>& names,
                                       std::string& reason) {
  FieldMap fields;
  for (const auto& name : names) {
    const auto it = j.find(name);
    if (it == j.end()) {
      reason = "missing field '" + name + "'";
      return std::nullopt;
    }
    auto text = ScalarText(*it);
    if (!text) {
      reason = "field '" + name + "' is not a string";
      return std::nullopt;
    }
    if (text->empty()) {
      reason = "empty field '" + name + "'";
      return std::nullopt;
    }
    fields.emplace_back(name, std::move(*text));
  }
  return fields;
}

ordered_json FieldsJson(const FieldMap& fields) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : fields) j[k] = v;
  return j;
}

std::string EmployeeJson(const EmployeeProfile& e) {
  ordered_json j = FieldsJson(e.fields);
  j["age"] = std::stoi(j["age"].get<std::string>());
  return j.dump();
}

std::string JoinKeys(const std::vector<std::string>& keys, bool quoted) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ", ";
    if (quoted) {
      out += "\"" + keys[i] + "\"";
    } else {
      std::string words = keys[i];
      std::replace(words.begin(), words.end(), '_', ' ');
      out += words;
    }
  }
  return out;
}

const char* LanguageDisplayName(Language language) {
  switch (language) {
    case Language::kEn: return "English";
    case Language::kIt: return "Italian";
    case Language::kDe: return "German";
    default: return "English";
  }
}

ordered_json AccountJson(const StageAccount& a) {
  ordered_json j;
  j["requested"] = a.requested;
  j["produced"] = a.produced;
  j["discarded"] = a.discarded;
  j["never_attempted"] = a.never_attempted;
  j["calls"] = a.calls;
  ordered_json reasons = ordered_json::object();
  for (const auto& [reason, count] : a.rejections) reasons[reason] = count;
  j["rejections"] = reasons;
  return j;
}

void NeverAttempted(StageAccount& account, std::size_t n) {
  account.requested += n;
  account.never_attempted += n;
}

}  // namespace

std::string RenderTemplate(std::string_view text, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      out += '{';
      ++i;
    } else if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      out += '}';
      ++i;
    } else if (c == '{') {
      const auto close = text.find('}', i);
      Require(close != std::string_view::npos, ErrorKind::kValidation, "unclosed placeholder");
      const std::string name(text.substr(i + 1, close - i - 1));
      const bool valid = !name.empty() && std::all_of(name.begin(), name.end(), [](char ch) {
        return std::islower(static_cast<unsigned char>(ch)) || ch == '_';
      });
      Require(valid, ErrorKind::kValidation, "malformed placeholder '{" + name + "}'");
      const auto it = values.find(name);
      Require(it != values.end(), ErrorKind::kValidation, "unbound placeholder '{" + name + "}'");
      out += it->second;
      i = close;
    } else if (c == '}') {
      Fail(ErrorKind::kValidation, "stray '}'");
    } else {
      out += c;
    }
  }
  return out;
}

const std::vector<std::string>& PromptSet::Names() {
  static const std::vector<std::string> names = {
      "system",          "company",          "employee",      "scenario_legitimate",
      "scenario_phishing", "email_legitimate", "email_phishing"};
  return names;
}

PromptSet PromptSet::Builtin() {
  PromptSet set;
  for (const auto& name : Names()) set.Set(name, BuiltinTemplates().at(name));
  return set;
}

PromptSet PromptSet::Load(const std::filesystem::path& dir) {
  Require(std::filesystem::is_directory(dir), ErrorKind::kValidation,
          "prompt directory " + dir.string() + " does not exist");
  PromptSet set = Builtin();
  for (const auto& name : Names()) {
    const auto path = dir / (name + ".txt");
    if (std::filesystem::exists(path)) set.Set(name, ReadFile(path));
  }
  return set;
}

const std::string& PromptSet::Text(std::string_view name) const {
  const auto it = templates_.find(name);
  Require(it != templates_.end(), ErrorKind::kValidation,
          "unknown prompt template '" + std::string(name) + "'");
  return it->second;
}

void PromptSet::Set(const std::string& name, std::string text) {
  text = TrimTrailing(std::move(text));
  CheckTemplate(name, text);
  templates_[name] = std::move(text);
}

std::string PromptSet::Version(std::string_view name) const { return Sha256Hex(Text(name)).substr(0, 12); }

std::map<std::string, std::string> PromptSet::Versions() const {
  std::map<std::string, std::string> out;
  for (const auto& [name, text] : templates_) out[name] = Sha256Hex(text).substr(0, 12);
  return out;
}

std::string PromptSet::Render(std::string_view name, const std::map<std::string, std::string>& values) const {
  return RenderTemplate(Text(name), values);
}

const char* ScenarioKindName(ScenarioKind kind) {
  return kind == ScenarioKind::kPhishing ? "phishing" : "legitimate";
}

const std::vector<std::string>& CompanyFields() {
  static const std::vector<std::string> fields = {
      "company_name",          "establishment_year", "offered_products_services",
      "company_details",       "headquarters_location", "number_of_employees",
      "annual_revenue",        "main_consumer",      "affairs_extent"};
  return fields;
}

const std::vector<std::string>& EmployeeFields() {
  static const std::vector<std::string> fields = {
      "name",          "gender",          "age",           "birthplace",
      "qualifications", "languages",      "job_title",     "current_project",
      "time_employed", "tech_proficiency", "hobbies",      "social_media"};
  return fields;
}

const std::vector<std::string>& TraitKeys(ScenarioKind kind) {
  static const std::vector<std::string> legitimate = {
      "content_description", "sender", "tone", "style", "length", "receiver_info"};
  static const std::vector<std::string> phishing = {
      "phishing_type", "customization_level",          "objective",      "impersonated_identity",
      "method",        "social_engineering_technique", "tone_and_style", "length"};
  return kind == ScenarioKind::kPhishing ? phishing : legitimate;
}

Country ResolveCountry(std::string_view text) {
  const std::string key = Lower(text);
  if (key == "it" || key == "italy") return {"IT", "Italy", Language::kIt};
  if (key == "de" || key == "germany") return {"DE", "Germany", Language::kDe};
  if (key == "uk" || key == "gb" || key == "united kingdom") return {"UK", "the United Kingdom", Language::kEn};
  if (key == "us" || key == "usa" || key == "united states") return {"US", "the United States", Language::kEn};
  Fail(ErrorKind::kValidation, "unsupported country '" + std::string(text) + "' (expected IT, DE, UK or US)");
}

EmailRecord GeneratedEmail::ToRecord() const {
  EmailRecord r;
  r.id = employee_ref + "-m" + std::to_string(slot);
  r.subject = subject;
  r.body = body;
  r.label = kind == ScenarioKind::kPhishing ? Label::kPhishing : Label::kBenign;
  r.language = language;
  r.source = "e-phishgen";
  r.generated = true;
  return r;
}

std::optional<CompanyProfile> ValidateCompany(const std::string& json_object, std::string& reason) {
  const auto j = ParseObject(json_object, reason);
  if (!j) return std::nullopt;
  auto fields = RequiredFields(*j, CompanyFields(), reason);
  if (!fields) return std::nullopt;
  return CompanyProfile{std::move(*fields), {}};
}

std::optional<EmployeeProfile> ValidateEmployee(const std::string& json_object, std::string& reason) {
  const auto j = ParseObject(json_object, reason);
  if (!j) return std::nullopt;
  auto fields = RequiredFields(*j, EmployeeFields(), reason);
  if (!fields) return std::nullopt;
  const auto& age_value = (*j)["age"];
  long age = -1;
  if (age_value.is_number_integer()) {
    age = age_value.get<long>();
  } else if (age_value.is_string()) {
    const std::string s = (*fields)[2].second;
    if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      reason = "age is not an integer";
      return std::nullopt;
    }
    age = std::stol(s);
  } else {
    reason = "age is not an integer";
    return std::nullopt;
  }
  if (age < 16 || age > 80) {
    reason = "age out of range";
    return std::nullopt;
  }
  (*fields)[2].second = std::to_string(age);
  return EmployeeProfile{std::move(*fields), {}};
}

std::optional<EmailScenario> ValidateScenario(ScenarioKind kind, const std::string& json_object,
                                              std::string& reason) {
  const auto j = ParseObject(json_object, reason);
  if (!j) return std::nullopt;
  const auto& keys = TraitKeys(kind);
  for (const auto& [key, value] : j->items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      reason = "unexpected trait '" + key + "'";
      return std::nullopt;
    }
  }
  auto traits = RequiredFields(*j, keys, reason);
  if (!traits) return std::nullopt;
  return EmailScenario{kind, std::move(*traits), {}};
}

std::optional<std::vector<std::string>> ExtractJsonItems(std::string_view response) {
  auto items_of = [](const ordered_json& j) -> std::optional<std::vector<std::string>> {
    std::vector<std::string> items;
    if (j.is_array()) {
      for (const auto& e : j) items.push_back(e.dump());
    } else if (j.is_object()) {
      items.push_back(j.dump());
    } else {
      return std::nullopt;
    }
    return items;
  };
  auto try_parse = [&](std::string_view text) -> std::optional<std::vector<std::string>> {
    const auto j = ordered_json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return items_of(j);
  };
  if (auto whole = try_parse(response)) return whole;
  for (const auto& [open, close] : {std::pair{'[', ']'}, std::pair{'{', '}'}}) {
    const auto first = response.find(open);
    const auto last = response.rfind(close);
    if (first != std::string_view::npos && last != std::string_view::npos && last > first) {
      if (auto inner = try_parse(response.substr(first, last - first + 1))) return inner;
    }
  }
  return std::nullopt;
}

void StageAccount::Merge(const StageAccount& other) {
  requested += other.requested;
  produced += other.produced;
  discarded += other.discarded;
  never_attempted += other.never_attempted;
  calls += other.calls;
  for (const auto& [reason, count] : other.rejections) rejections[reason] += count;
}

void GenerationConfig::Validate() const {
  Require(companies >= 1 && employees >= 1 && emails >= 1, ErrorKind::kValidation,
          "companies, employees and emails must all be at least 1");
  Require(benign_ratio >= 0.0 && benign_ratio <= 1.0, ErrorKind::kValidation,
          "benign_ratio must be in [0, 1]");
  const double benign = static_cast<double>(emails) * benign_ratio;
  Require(std::fabs(benign - std::round(benign)) < 1e-9, ErrorKind::kValidation,
          "emails x benign_ratio must be an integer");
  Require(temperature >= 0.0 && temperature <= 2.0, ErrorKind::kValidation,
          "temperature must be in [0, 2]");
  Require(jobs >= 1, ErrorKind::kValidation, "jobs must be at least 1");
  ResolveCountry(country);
}

std::size_t GenerationConfig::BenignPerEmployee() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(emails) * benign_ratio));
}

std::string GenerationReport::ToJson() const {
  ordered_json j;
  j["format"] = "phishbench-generation-report";
  j["version"] = 1;
  j["country"] = country.code;
  j["language"] = LanguageName(country.language);
  j["companies"] = config.companies;
  j["employees_per_company"] = config.employees;
  j["emails_per_employee"] = config.emails;
  j["benign_ratio"] = config.benign_ratio;
  j["temperature"] = config.temperature;
  j["provider_id"] = provider_id;
  j["model"] = model;
  ordered_json versions = ordered_json::object();
  for (const auto& [name, v] : prompt_versions) versions[name] = v;
  j["prompt_versions"] = versions;
  j["requested"] = emails.requested;
  j["produced"] = emails.produced;
  j["discarded"] = emails.discarded;
  j["never_attempted"] = emails.never_attempted;
  j["produced_benign"] = produced_benign;
  j["produced_phishing"] = produced_phishing;
  ordered_json stages;
  stages["companies"] = AccountJson(companies);
  stages["employees"] = AccountJson(employees);
  stages["scenarios"] = AccountJson(scenarios);
  stages["emails"] = AccountJson(emails);
  j["stages"] = stages;
  j["aborted"] = aborted;
  j["abort_reason"] = abort_reason;
  j["partial"] = cancelled;
  return j.dump(2) + "\n";
}

Corpus GenerationResult::ToCorpus() const {
  Corpus corpus;
  corpus.reserve(emails.size());
  for (const auto& e : emails) corpus.push_back(e.ToRecord());
  return corpus;
}

Generator::Generator(LlmClient& client, PromptSet prompts, GenerationConfig config)
    : client_(client), prompts_(std::move(prompts)), config_(std::move(config)) {
  config_.Validate();
  country_ = ResolveCountry(config_.country);
}

// One logical ask: the prompt, plus a single re-ask when the answer does not
// parse. Transport failures are not re-asked.
std::optional<std::vector<std::string>> Generator::Ask(const std::string& user_prompt,
                                                      StageAccount& account) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    ChatRequest request;
    request.temperature = config_.temperature;
    request.messages.push_back({"system", prompts_.Text("system")});
    request.messages.push_back(
        {"user", attempt == 0 ? user_prompt : user_prompt + "\n\n" + kStructuredReaskSuffix});
    ++account.calls;
    try {
      const auto exchange = client_.Complete(request);
      if (auto items = ExtractJsonItems(exchange.response)) return items;
    } catch (const TransportError&) {
      ++account.rejections["transport failure"];
      return std::nullopt;
    }
  }
  ++account.rejections["unparseable response"];
  return std::nullopt;
}

// Asks for `count` items, validates each, and tops up once when short. A
// response that fails to parse even after the re-ask ends the stage.
template <typename T, typename ValidateFn>
std::vector<T> Generator::CollectList(const std::string& template_name,
                                      std::map<std::string, std::string> values, std::size_t count,
                                      StageAccount& account, ValidateFn validate) {
  std::vector<T> out;
  account.requested += count;
  for (int round = 0; round < 2 && out.size() < count; ++round) {
    values["count"] = std::to_string(count - out.size());
    const auto items = Ask(prompts_.Render(template_name, values), account);
    if (!items) break;
    for (const auto& item : *items) {
      if (out.size() == count) break;
      std::string reason;
      if (auto v = validate(item, reason)) {
        out.push_back(std::move(*v));
      } else {
        ++account.rejections[reason];
      }
    }
  }
  account.produced += out.size();
  account.discarded += count - out.size();
  return out;
}

std::vector<CompanyProfile> Generator::GenerateCompanies(StageAccount& account) {
  auto companies = CollectList<CompanyProfile>(
      "company", {{"country", country_.name}}, config_.companies, account,
      [](const std::string& item, std::string& reason) { return ValidateCompany(item, reason); });
  for (std::size_t i = 0; i < companies.size(); ++i) {
    companies[i].ref = country_.code + "-c" + std::to_string(i);
  }
  return companies;
}

std::vector<EmployeeProfile> Generator::GenerateEmployees(const CompanyProfile& company,
                                                          StageAccount& account) {
  auto employees = CollectList<EmployeeProfile>(
      "employee", {{"company", FieldsJson(company.fields).dump()}}, config_.employees, account,
      [](const std::string& item, std::string& reason) { return ValidateEmployee(item, reason); });
  for (std::size_t j = 0; j < employees.size(); ++j) {
    employees[j].ref = company.ref + "-e" + std::to_string(j);
  }
  return employees;
}

std::vector<EmailScenario> Generator::GenerateScenarios(ScenarioKind kind, std::size_t count,
                                                        const CompanyProfile& company,
                                                        const EmployeeProfile& employee,
                                                        StageAccount& account) {
  Require(count >= 1, ErrorKind::kValidation, "scenario count must be at least 1");
  const auto& keys = TraitKeys(kind);
  auto scenarios = CollectList<EmailScenario>(
      std::string("scenario_") + ScenarioKindName(kind),
      {{"company", FieldsJson(company.fields).dump()},
       {"employee", EmployeeJson(employee)},
       {"traits", JoinKeys(keys, false)},
       {"trait_keys", JoinKeys(keys, true)}},
      count, account,
      [kind](const std::string& item, std::string& reason) { return ValidateScenario(kind, item, reason); });
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    scenarios[k].ref = employee.ref + "-s" + std::to_string(k);
  }
  return scenarios;
}

std::optional<GeneratedEmail> Generator::GenerateEmail(const EmailScenario& scenario,
                                                       const CompanyProfile& company,
                                                       const EmployeeProfile& employee,
                                                       StageAccount& account) {
  ++account.requested;
  const std::string prompt = prompts_.Render(
      std::string("email_") + ScenarioKindName(scenario.kind),
      {{"company", FieldsJson(company.fields).dump()},
       {"employee", EmployeeJson(employee)},
       {"scenario", FieldsJson(scenario.traits).dump()},
       {"language", LanguageDisplayName(country_.language)}});
  const auto items = Ask(prompt, account);
  auto discard = [&](const std::string& reason) -> std::optional<GeneratedEmail> {
    if (!reason.empty()) ++account.rejections[reason];
    ++account.discarded;
    return std::nullopt;
  };
  if (!items) return discard("");
  if (items->empty()) return discard("not an object");
  std::string reason;
  const auto j = ParseObject(items->front(), reason);
  if (!j) return discard(reason);
  GeneratedEmail email;
  for (const auto* field : {"subject", "body"}) {
    const auto it = j->find(field);
    if (it == j->end() || !it->is_string()) return discard(std::string("missing field '") + field + "'");
    const std::string text = CleanText(it->get<std::string>());
    if (text.empty()) return discard(std::string("empty ") + field);
    (std::string_view(field) == "subject" ? email.subject : email.body) = text;
  }
  email.kind = scenario.kind;
  email.scenario_ref = scenario.ref;
  email.company_ref = company.ref;
  email.employee_ref = employee.ref;
  email.language = country_.language;
  ++account.produced;
  return email;
}

GenerationResult Generator::Run(const std::atomic<bool>* cancel) {
  GenerationResult result;
  auto& report = result.report;
  report.config = config_;
  report.country = country_;
  report.provider_id = client_.config().provider_id;
  report.model = client_.config().model.empty() ? client_.config().provider_id : client_.config().model;
  report.prompt_versions = prompts_.Versions();

  const std::size_t x = config_.companies;
  const std::size_t y = config_.employees;
  const std::size_t n = config_.emails;
  const std::size_t benign = config_.BenignPerEmployee();

  result.companies = GenerateCompanies(report.companies);
  if (result.companies.empty()) {
    report.aborted = true;
    report.abort_reason = "no valid companies";
    NeverAttempted(report.employees, x * y);
    NeverAttempted(report.scenarios, x * y * n);
    NeverAttempted(report.emails, x * y * n);
    return result;
  }
  const std::size_t missing_companies = x - result.companies.size();
  NeverAttempted(report.employees, missing_companies * y);
  NeverAttempted(report.scenarios, missing_companies * y * n);
  NeverAttempted(report.emails, missing_companies * y * n);

  struct CompanyWork {
    bool done = false;
    std::vector<EmployeeProfile> employees;
    std::vector<GeneratedEmail> emails;
    StageAccount employee_account;
    StageAccount scenario_account;
    StageAccount email_account;
  };
  std::vector<CompanyWork> work(result.companies.size());

  auto process = [&](std::size_t c) {
    const auto& company = result.companies[c];
    auto& w = work[c];
    w.employees = GenerateEmployees(company, w.employee_account);
    const std::size_t missing = y - w.employees.size();
    NeverAttempted(w.scenario_account, missing * n);
    NeverAttempted(w.email_account, missing * n);
    for (const auto& employee : w.employees) {
      std::size_t slot_base = 0;
      for (const auto kind : {ScenarioKind::kLegitimate, ScenarioKind::kPhishing}) {
        const std::size_t count = kind == ScenarioKind::kLegitimate ? benign : n - benign;
        if (count == 0) continue;
        auto scenarios = GenerateScenarios(kind, count, company, employee, w.scenario_account);
        NeverAttempted(w.email_account, count - scenarios.size());
        for (std::size_t k = 0; k < scenarios.size(); ++k) {
          auto& scenario = scenarios[k];
          scenario.ref = employee.ref + "-s" + std::to_string(slot_base + k);
          if (auto email = GenerateEmail(scenario, company, employee, w.email_account)) {
            email->slot = slot_base + k;
            w.emails.push_back(std::move(*email));
          }
        }
        slot_base += count;
      }
    }
    w.done = true;
  };
  const std::size_t jobs = client_.order_sensitive() ? 1 : config_.jobs;
  ParallelFor(work.size(), jobs, process, cancel);

  for (auto& w : work) {
    if (!w.done) {
      report.cancelled = true;
      NeverAttempted(report.employees, y);
      NeverAttempted(report.scenarios, y * n);
      NeverAttempted(report.emails, y * n);
      continue;
    }
    report.employees.Merge(w.employee_account);
    report.scenarios.Merge(w.scenario_account);
    report.emails.Merge(w.email_account);
    for (auto& e : w.employees) result.employees.push_back(std::move(e));
    for (auto& e : w.emails) {
      (e.kind == ScenarioKind::kPhishing ? report.produced_phishing : report.produced_benign)++;
      result.emails.push_back(std::move(e));
    }
  }
  return result;
}

std::filesystem::path ReportPathFor(const std::filesystem::path& corpus_path) {
  return corpus_path.parent_path() / (corpus_path.stem().string() + ".report.json");
}

GenerationResult RunPipeline(LlmClient& client, const PromptSet& prompts, const GenerationConfig& config,
                             const std::filesystem::path& corpus_path, const std::atomic<bool>* cancel) {
  Generator generator(client, prompts, config);
  auto result = generator.Run(cancel);
  WriteCanonical(result.ToCorpus(), corpus_path);
  WriteFileAtomic(ReportPathFor(corpus_path), result.report.ToJson());
  return result;
}

}  // namespace phishbench
