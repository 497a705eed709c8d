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

#include <gtest/gtest.h>

#include <set>

#include "json.hpp"
#include "phishbench/generator.hpp"
#include "test_util.hpp"

namespace phishbench {
namespace {

using nlohmann::json;

std::string FaultFreeScript() { return ReadFile(testing::FixturePath("generator_mock.jsonl")); }

struct Harness {
  std::shared_ptr<VirtualClock> clock = std::make_shared<VirtualClock>();
  MockProvider* mock = nullptr;
  std::unique_ptr<LlmClient> client;

  explicit Harness(const std::string& script) {
    ProviderConfig config;
    config.provider_id = "mock";
    config.kind = ProviderKind::kMock;
    config.mock_script = "inline";
    auto provider = std::make_unique<MockProvider>(script, clock, config.timeout_seconds);
    mock = provider.get();
    client = std::make_unique<LlmClient>(config, std::move(provider), clock);
  }
};

GenerationConfig Config(std::size_t x, std::size_t y, std::size_t n) {
  GenerationConfig c;
  c.country = "IT";
  c.companies = x;
  c.employees = y;
  c.emails = n;
  return c;
}

std::string Rule(const std::string& match, const json& extra) {
  json r = extra;
  r["match"] = match;
  return r.dump() + "\n";
}

json Company(int i) {
  return {{"company_name", "Co " + std::to_string(i)}, {"establishment_year", "2000"},
          {"offered_products_services", "Widgets"},    {"company_details", "Makes widgets"},
          {"headquarters_location", "Milan"},           {"number_of_employees", "10"},
          {"annual_revenue", "EUR1 million"},           {"main_consumer", "Retail"},
          {"affairs_extent", "National"}};
}

void ExpectBalanced(const GenerationReport& r) {
  EXPECT_TRUE(r.companies.Balanced());
  EXPECT_TRUE(r.employees.Balanced());
  EXPECT_TRUE(r.scenarios.Balanced());
  EXPECT_TRUE(r.emails.Balanced());
}

TEST(Templates, RenderPlaceholdersAndEscapes) {
  EXPECT_EQ(RenderTemplate("Make {count} in {country}: {{\"a\": 1}}", {{"count", "3"}, {"country", "Italy"}}),
            "Make 3 in Italy: {\"a\": 1}");
  EXPECT_THROW(RenderTemplate("{missing}", {}), Error);
  EXPECT_THROW(RenderTemplate("a } b", {}), Error);
  EXPECT_THROW(RenderTemplate("{Bad Name}", {}), Error);
  EXPECT_THROW(RenderTemplate("{open", {}), Error);
}

TEST(Templates, BuiltinSetAndOverrides) {
  const auto builtin = PromptSet::Builtin();
  const auto versions = builtin.Versions();
  ASSERT_EQ(versions.size(), PromptSet::Names().size());
  for (const auto& [name, v] : versions) EXPECT_EQ(v.size(), 12u) << name;
  EXPECT_NE(builtin.Text("company").find("{country}"), std::string::npos);

  const auto dir = testing::ScratchDir("prompts");
  WriteFileAtomic(dir / "company.txt", "Invent {count} firms in {country}.\n");
  const auto loaded = PromptSet::Load(dir);
  EXPECT_EQ(loaded.Text("company"), "Invent {count} firms in {country}.");
  EXPECT_NE(loaded.Version("company"), builtin.Version("company"));
  EXPECT_EQ(loaded.Version("employee"), builtin.Version("employee"));

  WriteFileAtomic(dir / "employee.txt", "Profiles for {company} with {salary}");
  EXPECT_THROW(PromptSet::Load(dir), Error);
}

TEST(Validation, CompanyProfile) {
  std::string reason;
  const auto listing = Company(1).dump();
  const auto c = ValidateCompany(listing, reason);
  ASSERT_TRUE(c.has_value()) << reason;
  EXPECT_EQ(c->fields.size(), 9u);
  EXPECT_EQ(c->fields[0].second, "Co 1");

  auto numeric = Company(2);
  numeric["establishment_year"] = 1998;
  ASSERT_TRUE(ValidateCompany(numeric.dump(), reason).has_value());
  EXPECT_EQ(ValidateCompany(numeric.dump(), reason)->fields[1].second, "1998");

  auto missing = Company(3);
  missing.erase("annual_revenue");
  EXPECT_FALSE(ValidateCompany(missing.dump(), reason).has_value());
  EXPECT_EQ(reason, "missing field 'annual_revenue'");

  auto blank = Company(4);
  blank["company_name"] = "  <b></b> ";
  EXPECT_FALSE(ValidateCompany(blank.dump(), reason).has_value());
  EXPECT_EQ(reason, "empty field 'company_name'");

  EXPECT_FALSE(ValidateCompany("[1]", reason).has_value());
  EXPECT_EQ(reason, "not an object");
}

TEST(Validation, EmployeeAge) {
  json e = json::parse(R"({"name": "Marco Bianchi", "gender": "M", "age": 29, "birthplace": "Florence, Italy",
    "qualifications": "BSc", "languages": "Italian", "job_title": "Junior Project Coordinator",
    "current_project": "Automation", "time_employed": "2 years", "tech_proficiency": "Intermediate",
    "hobbies": "Traveling", "social_media": "LinkedIn"})");
  std::string reason;
  ASSERT_TRUE(ValidateEmployee(e.dump(), reason).has_value()) << reason;
  e["age"] = "41";
  EXPECT_EQ(ValidateEmployee(e.dump(), reason)->fields[2].second, "41");
  e["age"] = "twenty";
  EXPECT_FALSE(ValidateEmployee(e.dump(), reason).has_value());
  EXPECT_EQ(reason, "age is not an integer");
  e["age"] = 29.5;
  EXPECT_FALSE(ValidateEmployee(e.dump(), reason).has_value());
  for (const int age : {15, 81}) {
    e["age"] = age;
    EXPECT_FALSE(ValidateEmployee(e.dump(), reason).has_value());
    EXPECT_EQ(reason, "age out of range");
  }
  for (const int age : {16, 80}) {
    e["age"] = age;
    EXPECT_TRUE(ValidateEmployee(e.dump(), reason).has_value());
  }
}

TEST(Validation, ScenarioTraitKeysMustMatchExactly) {
  json legit;
  for (const auto& k : TraitKeys(ScenarioKind::kLegitimate)) legit[k] = "x";
  std::string reason;
  const auto s = ValidateScenario(ScenarioKind::kLegitimate, legit.dump(), reason);
  ASSERT_TRUE(s.has_value()) << reason;
  EXPECT_EQ(s->traits.size(), 6u);
  EXPECT_FALSE(ValidateScenario(ScenarioKind::kPhishing, legit.dump(), reason).has_value());

  json phishing;
  for (const auto& k : TraitKeys(ScenarioKind::kPhishing)) phishing[k] = "y";
  EXPECT_EQ(TraitKeys(ScenarioKind::kPhishing).size(), 8u);
  EXPECT_TRUE(ValidateScenario(ScenarioKind::kPhishing, phishing.dump(), reason).has_value());
  phishing.erase("objective");
  EXPECT_FALSE(ValidateScenario(ScenarioKind::kPhishing, phishing.dump(), reason).has_value());
  EXPECT_EQ(reason, "missing field 'objective'");

  legit["urgency"] = "high";
  EXPECT_FALSE(ValidateScenario(ScenarioKind::kLegitimate, legit.dump(), reason).has_value());
  EXPECT_EQ(reason, "unexpected trait 'urgency'");
}

TEST(Extraction, JsonItemsFromResponses) {
  EXPECT_EQ(ExtractJsonItems(R"([{"a":1},{"b":2}])")->size(), 2u);
  EXPECT_EQ(ExtractJsonItems("Sure! ```json\n[{\"a\":1}]\n``` Enjoy.")->size(), 1u);
  EXPECT_EQ(ExtractJsonItems(R"(Here: {"subject":"s","body":"b"})")->size(), 1u);
  EXPECT_FALSE(ExtractJsonItems("I cannot help with that.").has_value());
  EXPECT_FALSE(ExtractJsonItems("42").has_value());
}

TEST(Companies, DiscardAndTopUp) {
  const json first = {Company(0), Company(1), json{{"company_name", "Half"}}};
  const json topup = {json{{"company_name", "Still half"}}};
  Harness h(Rule("index", {{"index", 0}, {"response", first.dump()}}) +
            Rule("index", {{"index", 1}, {"response", topup.dump()}}));
  Generator g(*h.client, PromptSet::Builtin(), Config(3, 1, 2));
  StageAccount account;
  const auto companies = g.GenerateCompanies(account);
  ASSERT_EQ(companies.size(), 2u);
  EXPECT_EQ(companies[1].ref, "IT-c1");
  EXPECT_EQ(account.requested, 3u);
  EXPECT_EQ(account.produced, 2u);
  EXPECT_EQ(account.discarded, 1u);
  EXPECT_EQ(account.calls, 2u);
  EXPECT_EQ(account.rejections.at("missing field 'establishment_year'"), 2u);
  EXPECT_TRUE(account.Balanced());
}

TEST(Companies, ProseAbortsAfterOneReask) {
  Harness h(Rule("default", {{"response", "Here are some lovely companies in Italy."}}));
  const auto result = Generator(*h.client, PromptSet::Builtin(), Config(3, 2, 4)).Run();
  EXPECT_TRUE(result.report.aborted);
  EXPECT_EQ(result.report.companies.calls, 2u);
  EXPECT_EQ(h.mock->calls(), 2u);
  EXPECT_EQ(result.report.companies.rejections.at("unparseable response"), 1u);
  EXPECT_EQ(result.report.emails.never_attempted, 24u);
  EXPECT_TRUE(result.emails.empty());
  ExpectBalanced(result.report);
}

TEST(Employees, ValidProfilesAndUnparseableAge) {
  json employees = json::array();
  for (int i = 0; i < 5; ++i) {
    employees.push_back({{"name", "E" + std::to_string(i)}, {"gender", "F"}, {"age", 30 + i},
                         {"birthplace", "Rome"}, {"qualifications", "BSc"}, {"languages", "Italian"},
                         {"job_title", "Analyst"}, {"current_project", "Audit"},
                         {"time_employed", "1 year"}, {"tech_proficiency", "High"},
                         {"hobbies", "Chess"}, {"social_media", "none"}});
  }
  CompanyProfile company;
  std::string reason;
  company = *ValidateCompany(Company(0).dump(), reason);
  company.ref = "IT-c0";
  {
    Harness h(Rule("default", {{"response", employees.dump()}}));
    Generator g(*h.client, PromptSet::Builtin(), Config(1, 5, 2));
    StageAccount account;
    const auto got = g.GenerateEmployees(company, account);
    ASSERT_EQ(got.size(), 5u);
    EXPECT_EQ(got[4].ref, "IT-c0-e4");
    EXPECT_EQ(account.discarded, 0u);
    EXPECT_EQ(account.calls, 1u);
  }
  employees[2]["age"] = "twenty";
  {
    Harness h(Rule("index", {{"index", 0}, {"response", employees.dump()}}) +
              Rule("default", {{"response", "[]"}}));
    Generator g(*h.client, PromptSet::Builtin(), Config(1, 5, 2));
    StageAccount account;
    EXPECT_EQ(g.GenerateEmployees(company, account).size(), 4u);
    EXPECT_EQ(account.discarded, 1u);
    EXPECT_EQ(account.rejections.at("age is not an integer"), 1u);
  }
}

TEST(Pipeline, FaultFreeProducesExactCountsAndSplit) {
  Harness h(FaultFreeScript());
  const auto result = Generator(*h.client, PromptSet::Builtin(), Config(3, 2, 4)).Run();
  const auto& r = result.report;
  EXPECT_FALSE(r.aborted);
  EXPECT_EQ(r.requested(), 24u);
  EXPECT_EQ(r.produced(), 24u);
  EXPECT_EQ(r.emails.discarded, 0u);
  EXPECT_EQ(r.produced_benign, 12u);
  EXPECT_EQ(r.produced_phishing, 12u);
  ExpectBalanced(r);

  const auto corpus = result.ToCorpus();
  ASSERT_EQ(corpus.size(), 24u);
  EXPECT_FALSE(CheckRecords(corpus).has_value());
  EXPECT_EQ(corpus[0].id, "IT-c0-e0-m0");
  EXPECT_EQ(corpus[0].label, Label::kBenign);
  EXPECT_EQ(corpus[2].id, "IT-c0-e0-m2");
  EXPECT_EQ(corpus[2].label, Label::kPhishing);
  EXPECT_EQ(corpus[23].id, "IT-c2-e1-m3");
  for (const auto& rec : corpus) {
    EXPECT_TRUE(rec.generated);
    EXPECT_EQ(rec.source, "e-phishgen");
    EXPECT_EQ(rec.language, Language::kIt);
  }
  const auto stats = ComputeCorpusStats(corpus);
  EXPECT_EQ(stats.benign, 12u);
  EXPECT_EQ(stats.phishing, 12u);
  // 1 company call, 3 employee calls, 6 x (2 scenario calls + 4 emails).
  EXPECT_EQ(h.mock->calls(), 1u + 3u + 36u);
}

TEST(Pipeline, MalformedEmailPayloadsAreDiscardedWithoutReask) {
  // Calls are sequential once index rules exist: 0 companies, 1 employees of
  // c0, then per employee 6 calls (legit scenarios, 2 emails, phishing
  // scenarios, 2 emails). Calls 3 and 12 are emails.
  const std::string bad = json{{"subject", "Hello"}, {"body", ""}}.dump();
  Harness h(Rule("index", {{"index", 3}, {"response", bad}}) +
            Rule("index", {{"index", 12}, {"response", "{\"subject\": \"x\"}"}}) + FaultFreeScript());
  ASSERT_TRUE(h.client->order_sensitive());
  auto config = Config(3, 2, 4);
  config.jobs = 4;
  const auto result = Generator(*h.client, PromptSet::Builtin(), config).Run();
  const auto& r = result.report;
  EXPECT_EQ(r.produced(), 22u);
  EXPECT_EQ(r.emails.discarded, 2u);
  EXPECT_EQ(r.emails.requested, r.emails.produced + r.emails.discarded + r.emails.never_attempted);
  EXPECT_EQ(r.emails.rejections.at("empty body"), 1u);
  EXPECT_EQ(r.emails.rejections.at("missing field 'body'"), 1u);
  EXPECT_EQ(r.produced_benign, 11u);
  EXPECT_EQ(r.produced_phishing, 11u);
  ExpectBalanced(r);
  EXPECT_EQ(h.mock->calls(), 40u);
  const auto corpus = result.ToCorpus();
  std::set<std::string> ids;
  for (const auto& rec : corpus) ids.insert(rec.id);
  EXPECT_FALSE(ids.count("IT-c0-e0-m0"));
  EXPECT_FALSE(ids.count("IT-c0-e1-m2"));
  EXPECT_EQ(ids.size(), 22u);
}

TEST(Pipeline, TransportFailureDiscardsEmailWithReason) {
  Harness h(Rule("contains", {{"text", "Write the full text of a phishing email"}, {"status", 500}}) +
            FaultFreeScript());
  const auto result = Generator(*h.client, PromptSet::Builtin(), Config(1, 1, 4)).Run();
  EXPECT_EQ(result.report.produced(), 2u);
  EXPECT_EQ(result.report.emails.discarded, 2u);
  EXPECT_EQ(result.report.emails.rejections.at("transport failure"), 2u);
  ExpectBalanced(result.report);
}

TEST(Pipeline, DeterministicAndIndependentOfJobs) {
  const auto dir = testing::ScratchDir("generation");
  std::string reports[3];
  std::string corpora[3];
  for (int run = 0; run < 3; ++run) {
    Harness h(FaultFreeScript());
    auto config = Config(3, 2, 4);
    config.jobs = run == 2 ? 3 : 1;
    const auto path = dir / ("run" + std::to_string(run) + ".jsonl");
    RunPipeline(*h.client, PromptSet::Builtin(), config, path);
    corpora[run] = ReadFile(path);
    reports[run] = ReadFile(ReportPathFor(path));
  }
  EXPECT_EQ(ReportPathFor(dir / "run0.jsonl"), dir / "run0.report.json");
  EXPECT_EQ(corpora[0], corpora[1]);
  EXPECT_EQ(corpora[0], corpora[2]);
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_EQ(reports[0], reports[2]);
  const auto report = json::parse(reports[0]);
  EXPECT_EQ(report["requested"], 24);
  EXPECT_EQ(report["produced"], 24);
  EXPECT_EQ(report["temperature"], 0.8);
  EXPECT_EQ(report["prompt_versions"].size(), PromptSet::Names().size());
  EXPECT_EQ(LoadCanonical(dir / "run0.jsonl").size(), 24u);
}

TEST(Pipeline, CancelledBeforeCompanyWorkIsPartial) {
  Harness h(FaultFreeScript());
  std::atomic<bool> cancel{true};
  const auto result = Generator(*h.client, PromptSet::Builtin(), Config(3, 2, 4)).Run(&cancel);
  EXPECT_TRUE(result.report.cancelled);
  EXPECT_EQ(result.report.produced(), 0u);
  EXPECT_EQ(result.report.emails.never_attempted, 24u);
  ExpectBalanced(result.report);
}

TEST(Config, Validation) {
  auto c = Config(1, 1, 5);
  EXPECT_THROW(c.Validate(), Error);
  c.emails = 10;
  EXPECT_NO_THROW(c.Validate());
  EXPECT_EQ(c.BenignPerEmployee(), 5u);
  c.country = "France";
  EXPECT_THROW(c.Validate(), Error);
  c.country = "united states";
  EXPECT_NO_THROW(c.Validate());
  EXPECT_EQ(ResolveCountry("gb").code, "UK");
  EXPECT_EQ(ResolveCountry("Germany").language, Language::kDe);
  c.companies = 0;
  EXPECT_THROW(c.Validate(), Error);
}

}  // namespace
}  // namespace phishbench
