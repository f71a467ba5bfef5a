// Copyright 2026 The factda Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// factda command-line entry point.
//
//   factda preprocess --input dump.jsonl --chart charts/multifc.chart --out data/
//   factda train --source a.jsonl --target b.jsonl --config configs/default.cfg --out run/
//   factda evaluate --pipeline run/ --test b.jsonl --component pipeline --out report
//   factda predict --pipeline run/ --claims claims.jsonl --out verdicts.jsonl
//   factda export-embeddings --pipeline run/ --corpus b.jsonl --out emb.csv
//
// Exit codes: 0 success, 2 validation, 3 training failure, 4 evaluation failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "factda/checkpoint.hpp"
#include "factda/config.hpp"
#include "factda/data.hpp"
#include "factda/error.hpp"
#include "factda/eval.hpp"
#include "factda/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace factda {
namespace {

constexpr int kExitValidation = 2;
constexpr int kExitTraining = 3;
constexpr int kExitEvaluation = 4;

/// Failure carrying the exit code chosen by the command that raised it.
struct CommandFailure {
  int code;
  std::string message;
};

bool is_validation_error(const std::exception& e) {
  return dynamic_cast<const ParseError*>(&e) != nullptr || dynamic_cast<const IntegrityError*>(&e) != nullptr ||
         dynamic_cast<const LabelError*>(&e) != nullptr || dynamic_cast<const SplitError*>(&e) != nullptr ||
         dynamic_cast<const ConfigError*>(&e) != nullptr || dynamic_cast<const ArgumentError*>(&e) != nullptr ||
         dynamic_cast<const CheckpointError*>(&e) != nullptr;
}

template <typename F>
auto guarded(int failure_code, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const CommandFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw CommandFailure{is_validation_error(e) ? kExitValidation : failure_code, e.what()};
  }
}

DomainCorpus read_corpus(const fs::path& path) {
  const fs::path docs = sidecar_documents_path(path);
  return load_corpus(path, kJsonlV1, fs::exists(docs) ? std::optional<fs::path>(docs) : std::nullopt);
}

struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool no_retriever_adapt = false;
  bool no_doc_adapt = false;
  bool no_reader_adapt = false;
  bool no_reverse = false;
  bool no_align = false;
  bool uniform_ranking = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Complete key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", overrides, "Override one field, key=value (repeatable)");
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_flag("--no-retriever-adapt", no_retriever_adapt, "Skip adversarial retriever adaptation");
    cmd->add_flag("--no-doc-adapt", no_doc_adapt, "Adapt the claim encoder only");
    cmd->add_flag("--no-reader-adapt", no_reader_adapt, "Train the reader on source pairs only");
    cmd->add_flag("--no-reverse", no_reverse, "Disable reversal augmentation");
    cmd->add_flag("--no-align", no_align, "Disable correlation alignment");
    cmd->add_flag("--uniform-ranking", uniform_ranking, "Average the top k documents uniformly");
  }

  AdaptationConfig resolve() const {
    AdaptationConfig cfg = config_path.empty() ? AdaptationConfig{} : load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    cfg.no_retriever_adapt = cfg.no_retriever_adapt || no_retriever_adapt;
    cfg.no_doc_adapt = cfg.no_doc_adapt || no_doc_adapt;
    cfg.no_reader_adapt = cfg.no_reader_adapt || no_reader_adapt;
    cfg.no_reverse = cfg.no_reverse || no_reverse;
    cfg.no_align = cfg.no_align || no_align;
    cfg.uniform_ranking = cfg.uniform_ranking || uniform_ranking;
    cfg.validate();
    return cfg;
  }
};

void cmd_preprocess(const fs::path& input, const fs::path& chart_path, const std::string& scheme,
                    const fs::path& out, const PreprocessOptions& base) {
  PreprocessOptions options = base;
  DomainMappingChart chart = DomainMappingChart::multifc();
  guarded(kExitValidation, [&] {
    options.scheme = parse_label_scheme(scheme);
    if (!chart_path.empty()) chart = DomainMappingChart::load(chart_path);
  });
  guarded(kExitValidation, [&] {
    const PreprocessResult result = preprocess_dump(input, chart, options);
    fs::create_directories(out);
    for (const auto& corpus : result.corpora) {
      const fs::path claims = out / (corpus.name + ".jsonl");
      write_corpus(corpus, claims, sidecar_documents_path(claims));
      std::cout << corpus.name << ": " << corpus.claim_count() << " claims, " << corpus.documents.size()
                << " documents\n";
    }
    if (result.skipped > 0) std::cerr << "skipped " << result.skipped << " records without evidence\n";
  });
}

void cmd_train(const fs::path& source_path, const fs::path& target_path, const ConfigFlags& flags,
               const fs::path& out) {
  const AdaptationConfig cfg = guarded(kExitValidation, [&] { return flags.resolve(); });
  const DomainCorpus source = guarded(kExitValidation, [&] { return read_corpus(source_path); });
  const DomainCorpus target = guarded(kExitValidation, [&] { return read_corpus(target_path); });
  guarded(kExitTraining, [&] {
    PipelineTraces traces;
    const Pipeline pipeline = train_pipeline(source, target, cfg, &traces);
    save_pipeline(pipeline, out, &traces);
    std::cout << "trained " << scenario_name(source.name, target.name) << " into " << out.string() << "\n";
  });
}

void cmd_evaluate(const fs::path& pipeline_dir, const fs::path& test_path, const std::string& component,
                  const fs::path& out) {
  const Pipeline pipeline = guarded(kExitValidation, [&] {
    if (component != "retriever" && component != "reader" && component != "pipeline") {
      throw ConfigError("--component must be retriever, reader or pipeline");
    }
    return load_pipeline(pipeline_dir);
  });
  const DomainCorpus test = guarded(kExitValidation, [&] { return read_corpus(test_path); });
  guarded(kExitEvaluation, [&] {
    double value = 0.0;
    std::string metric = "macro_f1";
    if (component == "retriever") {
      value = evaluate_retriever(pipeline.retriever, test);
      metric = "ndcg@10";
    } else if (component == "reader") {
      value = evaluate_reader(pipeline.reader, test, pipeline.config);
    } else {
      value = evaluate_pipeline(pipeline, test);
    }
    const std::vector<ScenarioReport> reports = {make_report(pipeline.manifest.source, test.name, component, metric,
                                                             {value}, sha256_hex(pipeline.config.to_text()))};
    write_file(fs::path(out.string() + ".json"), reports_to_json(reports));
    write_file(fs::path(out.string() + ".md"), reports_to_markdown(reports));
    std::cout << reports_to_markdown(reports);
  });
}

void cmd_predict(const fs::path& pipeline_dir, const fs::path& claims_path, const fs::path& out) {
  const Pipeline pipeline = guarded(kExitValidation, [&] { return load_pipeline(pipeline_dir); });
  guarded(kExitEvaluation, [&] {
    std::ifstream in(claims_path);
    if (!in) throw ParseError("cannot open claims file '" + claims_path.string() + "'");
    std::string lines;
    std::string text;
    long line = 0;
    while (std::getline(in, text)) {
      ++line;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      json record;
      try {
        const json obj = json::parse(text);
        const Claim claim{obj.at("id").get<std::string>(), obj.at("text").get<std::string>(),
                          obj.value("domain", std::string())};
        if (claim.text.empty()) throw ParseError("claim '" + claim.id + "' has empty text");
        record = json::parse(verdict_to_json(verify(pipeline, claim)));
      } catch (const std::exception& e) {
        record = {{"line", line}, {"error", e.what()}};
      }
      lines += record.dump() + "\n";
    }
    write_file(out, lines);
  });
}

void cmd_export_embeddings(const fs::path& pipeline_dir, const fs::path& corpus_path, const std::string& which,
                           const fs::path& out) {
  const Pipeline pipeline = guarded(kExitValidation, [&] {
    if (which != "claims" && which != "docs") throw ConfigError("--which must be claims or docs");
    return load_pipeline(pipeline_dir);
  });
  const DomainCorpus corpus = guarded(kExitValidation, [&] { return read_corpus(corpus_path); });
  guarded(kExitEvaluation, [&] {
    std::vector<std::string> ids;
    std::vector<std::string> domains;
    std::vector<std::string> texts;
    if (which == "claims") {
      for (const auto& c : corpus.all_claims()) {
        ids.push_back(c.id);
        domains.push_back(c.domain.empty() ? corpus.name : c.domain);
        texts.push_back(c.text);
      }
    } else {
      for (const auto& d : corpus.documents) {
        ids.push_back(d.id);
        domains.push_back(d.domain.empty() ? corpus.name : d.domain);
        texts.push_back(d.text);
      }
    }
    const TextEncoder& encoder =
        which == "claims" ? pipeline.retriever.claim_encoder() : pipeline.retriever.doc_encoder();
    write_file(out, embeddings_csv(ids, domains, encoder.encode_all(texts)));
  });
}

}  // namespace
}  // namespace factda

int main(int argc, char** argv) {
  using namespace factda;
  CLI::App app{"Domain-adaptive fact checking: retriever adaptation, aligned reader, rank-weighted verdicts"};
  app.require_subcommand(1);

  std::string input, chart, scheme = "multifc-binary", out;
  PreprocessOptions prep;
  auto* preprocess = app.add_subcommand("preprocess", "Split a raw dump into per-domain corpora");
  preprocess->add_option("--input", input, "Raw dump (jsonl)")->required()->check(CLI::ExistingFile);
  preprocess->add_option("--chart", chart, "Domain mapping chart (default: built-in MultiFC chart)")
      ->check(CLI::ExistingFile);
  preprocess->add_option("--scheme", scheme, "multifc-binary or snopes-ternary")->capture_default_str();
  preprocess->add_option("--out", out, "Output directory")->required();
  preprocess->add_option("--seed", prep.seed, "Sampling and split seed")->capture_default_str();
  preprocess->add_option("--evidence", prep.evidence_per_claim, "Evidence documents kept per claim")
      ->capture_default_str();
  preprocess->add_option("--train-fraction", prep.train_fraction, "Train share per label")->capture_default_str();

  std::string source, target;
  ConfigFlags flags;
  auto* train = app.add_subcommand("train", "Train a pipeline from a labeled source and an unlabeled target");
  train->add_option("--source", source, "Labeled source corpus")->required()->check(CLI::ExistingFile);
  train->add_option("--target", target, "Target corpus (labels unused)")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out, "Output directory")->required();
  flags.attach(train);

  std::string pipeline_dir, test, component = "pipeline";
  auto* evaluate = app.add_subcommand("evaluate", "Score a trained pipeline on a labeled test split");
  evaluate->add_option("--pipeline", pipeline_dir, "Pipeline directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--test", test, "Labeled corpus")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--component", component, "retriever, reader or pipeline")->capture_default_str();
  evaluate->add_option("--out", out, "Report path prefix (.json and .md are appended)")->required();

  std::string claims;
  auto* predict = app.add_subcommand("predict", "Write one verdict per claim line");
  predict->add_option("--pipeline", pipeline_dir, "Pipeline directory")->required()->check(CLI::ExistingDirectory);
  predict->add_option("--claims", claims, "Claims jsonl with id and text")->required()->check(CLI::ExistingFile);
  predict->add_option("--out", out, "Verdicts jsonl")->required();

  std::string corpus, which = "claims";
  auto* exp = app.add_subcommand("export-embeddings", "Write retriever vectors as CSV");
  exp->add_option("--pipeline", pipeline_dir, "Pipeline directory")->required()->check(CLI::ExistingDirectory);
  exp->add_option("--corpus", corpus, "Corpus whose texts are encoded")->required()->check(CLI::ExistingFile);
  exp->add_option("--which", which, "claims or docs")->capture_default_str();
  exp->add_option("--out", out, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (preprocess->parsed()) cmd_preprocess(input, chart, scheme, out, prep);
    if (train->parsed()) cmd_train(source, target, flags, out);
    if (evaluate->parsed()) cmd_evaluate(pipeline_dir, test, component, out);
    if (predict->parsed()) cmd_predict(pipeline_dir, claims, out);
    if (exp->parsed()) cmd_export_embeddings(pipeline_dir, corpus, which, out);
  } catch (const CommandFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return 0;
}
