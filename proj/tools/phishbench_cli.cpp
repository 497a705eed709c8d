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

#include <csignal>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phishbench/phishbench.h"

namespace {

pb_context* g_context = nullptr;

extern "C" void OnInterrupt(int) {
  if (g_context) pb_cancel(g_context);
  std::signal(SIGINT, SIG_DFL);
}

const std::map<std::string, std::string> kCommandHelp = {
    {"ingest", "Normalize a raw public dataset into a canonical corpus file"},
    {"generate", "Generate a synthetic multilingual email corpus through an LLM provider"},
    {"train", "Train a TF-IDF detector on canonical corpora"},
    {"predict", "Write a predictions file for a corpus with a trained detector"},
    {"cross-eval", "Train on each dataset and test on every dataset (seeded stratified splits)"},
    {"all-vs-one", "Train on all datasets but one and test on the held-out one"},
    {"llm-eval", "Zero-shot classification of a corpus by LLM providers"},
    {"external-test", "Test a detector, a predictions file or a provider on an external corpus"},
    {"report", "Re-export tables and plots from a results.jsonl file"},
};

const std::map<std::string, std::string> kKeyHelp = {
    {"config", "Settings file of key = value lines; flags override it"},
    {"dataset", "Dataset name in the registry"},
    {"in", "Raw input file"},
    {"out", "Output file or directory"},
    {"registry", "Dataset registry JSON (default: built-in)"},
    {"provider", "Provider id (llm-eval: comma list, default all)"},
    {"providers", "Provider registry JSON (default: built-in)"},
    {"country", "IT, DE, UK or US"},
    {"companies", "Companies to generate"},
    {"employees", "Employees per company"},
    {"emails", "Emails per employee"},
    {"benign-ratio", "Share of legitimate emails per employee"},
    {"temperature", "Sampling temperature for generation"},
    {"prompts", "Directory overriding the built-in prompt templates"},
    {"jobs", "Worker threads (default: logical cores)"},
    {"train", "Training corpora: comma list of path or name=path"},
    {"model", "Model family: lr, nb, rf, svm, mlp"},
    {"models", "Comma list of model families"},
    {"seed", "Model seed"},
    {"seeds", "Comma list of split seeds"},
    {"params", "Hyperparameter overrides: comma list of family.key=value"},
    {"subject-vocab", "Subject vocabulary cap"},
    {"body-vocab", "Body vocabulary cap"},
    {"min-df", "Minimum document frequency"},
    {"detector", "Detector file written by train"},
    {"test", "Test corpus"},
    {"test-name", "Name for the test corpus (default: file stem)"},
    {"datasets", "Comma list of name or name=path (names resolve to <data-dir>/<name>.jsonl)"},
    {"data-dir", "Directory of canonical <name>.jsonl corpora"},
    {"train-ratio", "Train share of each stratified split"},
    {"holdouts", "Comma list of datasets to hold out (default: all)"},
    {"sample", "Classify a seeded sample of this many records"},
    {"sample-seed", "Seed for --sample"},
    {"predictions", "Predictions file"},
    {"results", "results.jsonl written by an experiment"},
    {"log-level", "error, warn, info or debug"},
};

std::vector<std::string> Split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) out.push_back(item);
  return out;
}

std::string JsonEscape(const std::string& s) {
  std::string out;
  for (const unsigned char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += static_cast<char>(c);
    } else if (c == '\n') {
      out += "\\n";
    } else if (c < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

void PrintError(const std::string& category, const std::string& message) {
  std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n", category.c_str(), JsonEscape(message).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phishing detection benchmark: corpora, generation, detectors and experiments", "phishbench"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", pb_version());

  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& [command, help] : kCommandHelp) {
    auto* sub = app.add_subcommand(command, help);
    const char* keys = pb_command_keys(command.c_str());
    if (!keys) continue;
    for (const auto& key : Split(keys)) {
      const auto it = kKeyHelp.find(key);
      sub->add_option("--" + key, values[command][key], it == kKeyHelp.end() ? "" : it->second);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    std::fputs(app.help().c_str(), stderr);
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  std::string settings;
  for (const auto& [key, value] : values[command]) {
    if (sub->count("--" + key) == 0) continue;
    if (value.find('\n') != std::string::npos) {
      PrintError("usage", "--" + key + " must not contain a newline");
      return 2;
    }
    settings += key + " = " + value + "\n";
  }

  pb_context* ctx = nullptr;
  if (pb_context_create(&ctx) != PB_OK) {
    PrintError("runtime", "cannot create context");
    return 1;
  }
  g_context = ctx;
  std::signal(SIGINT, OnInterrupt);
  char* result = nullptr;
  const pb_status status = pb_run(ctx, command.c_str(), settings.c_str(), &result);
  g_context = nullptr;
  if (status != PB_OK) {
    PrintError(pb_status_name(status), pb_last_error(ctx));
    if (status == PB_ERR_USAGE) std::fputs(sub->help().c_str(), stderr);
  } else if (result) {
    std::printf("%s\n", result);
  }
  pb_free(result);
  const int code = pb_exit_code(status);
  pb_context_destroy(ctx);
  return code;
}
