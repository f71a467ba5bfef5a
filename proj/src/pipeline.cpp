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

#include "factda/pipeline.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "factda/checkpoint.hpp"
#include "factda/error.hpp"
#include "factda/random.hpp"

namespace factda {

using nlohmann::json;

std::vector<double> rank_weights(std::size_t k) {
  if (k == 0) throw ArgumentError("rank_weights: k must be at least 1");
  std::vector<double> w(k);
  double tail = 0.0;
  for (std::size_t j = k; j-- > 0;) {
    tail += 1.0 / static_cast<double>(j + 1);
    w[j] = tail / static_cast<double>(k);
  }
  return w;
}

Vector aggregate_ranked(const Eigen::Ref<const Matrix>& per_doc, std::size_t k, bool uniform) {
  const std::size_t kk = std::min<std::size_t>(k, static_cast<std::size_t>(per_doc.rows()));
  if (kk == 0) throw NoEvidenceError("no ranked documents to aggregate");
  const std::vector<double> w = uniform ? std::vector<double>(kk, 1.0 / static_cast<double>(kk)) : rank_weights(kk);
  Vector out = Vector::Zero(per_doc.cols());
  for (std::size_t j = 0; j < kk; ++j) out += w[j] * per_doc.row(static_cast<Index>(j)).transpose();
  return out;
}

namespace {

Matrix per_doc_distributions(const Reader& reader, const Claim& claim, std::span<const EvidenceDocument> docs,
                             std::size_t k, const AdaptationConfig& cfg) {
  const std::size_t kk = std::min(k, docs.size());
  Matrix out(static_cast<Index>(kk), reader.label_set().size());
  for (std::size_t j = 0; j < kk; ++j) {
    out.row(static_cast<Index>(j)) = predict_pair(reader, claim, docs[j], cfg).transpose();
  }
  return out;
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }
json series_json(const std::vector<double>& v) { return json(v); }

template <typename F>
auto run_stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

constexpr const char* kClaimEncoderFile = "claim_encoder.ckpt";
constexpr const char* kDocEncoderFile = "doc_encoder.ckpt";
constexpr const char* kReaderEncoderFile = "reader_encoder.ckpt";
constexpr const char* kReaderHeadFile = "reader_head.ckpt";
constexpr const char* kIndexFile = "index.bin";
constexpr const char* kDocumentsFile = "documents.jsonl";
constexpr const char* kConfigFile = "config.cfg";
constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kTracesFile = "traces.json";

std::string documents_jsonl(std::span<const EvidenceDocument> docs) {
  std::string out;
  for (const auto& d : docs) {
    out += json{{"id", d.id}, {"text", d.text}, {"domain", d.domain}}.dump();
    out += '\n';
  }
  return out;
}

std::vector<EvidenceDocument> parse_documents_jsonl(const std::string& text) {
  std::vector<EvidenceDocument> docs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json obj = json::parse(line);
      docs.push_back({obj.at("id").get<std::string>(), obj.at("text").get<std::string>(),
                      obj.value("domain", std::string())});
    } catch (const json::exception& e) {
      throw CheckpointError(std::string("malformed documents file: ") + e.what());
    }
  }
  return docs;
}

/// Serialized artifacts of a pipeline keyed by file name.
std::map<std::string, std::string> artifacts(const Pipeline& p) {
  return {
      {kClaimEncoderFile, serialize(to_checkpoint(p.retriever.claim_encoder()))},
      {kDocEncoderFile, serialize(to_checkpoint(p.retriever.doc_encoder()))},
      {kReaderEncoderFile, serialize(to_checkpoint(p.reader.encoder()))},
      {kReaderHeadFile, serialize(to_checkpoint(p.reader.head()))},
      {kIndexFile, serialize(p.index)},
      {kDocumentsFile, documents_jsonl(p.documents)},
      {kConfigFile, p.config.to_text()},
  };
}

}  // namespace

Vector rank_weighted_predict(const Reader& reader, const Claim& claim,
                             std::span<const EvidenceDocument> ranked_docs, std::size_t k,
                             const AdaptationConfig& cfg) {
  if (ranked_docs.empty()) throw NoEvidenceError("claim '" + claim.id + "' has no ranked documents");
  if (k == 0) throw ArgumentError("rank_weighted_predict: k must be at least 1");
  return aggregate_ranked(per_doc_distributions(reader, claim, ranked_docs, k, cfg), k, cfg.uniform_ranking);
}

std::string verdict_to_json(const Verdict& verdict) {
  json evidence = json::array();
  for (const auto& e : verdict.evidence) {
    evidence.push_back({{"doc_id", e.doc_id}, {"score", e.score}, {"distribution", vector_json(e.distribution)}});
  }
  return json{{"claim_id", verdict.claim_id},
              {"label", std::string(to_string(verdict.label))},
              {"distribution", vector_json(verdict.distribution)},
              {"evidence", std::move(evidence)}}
      .dump();
}

std::string RunManifest::to_json() const {
  return json{{"source", source}, {"target", target}, {"seeds", seeds},   {"config", config_text},
              {"stages", stages}, {"hashes", hashes}}
      .dump(2);
}

RunManifest RunManifest::from_json(std::string_view text) {
  try {
    const json obj = json::parse(text);
    RunManifest m;
    m.source = obj.at("source").get<std::string>();
    m.target = obj.at("target").get<std::string>();
    m.seeds = obj.at("seeds").get<std::map<std::string, std::uint64_t>>();
    m.config_text = obj.at("config").get<std::string>();
    m.stages = obj.at("stages").get<std::vector<std::string>>();
    m.hashes = obj.at("hashes").get<std::map<std::string, std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed manifest: ") + e.what());
  }
}

std::string PipelineTraces::to_json() const {
  auto adaptation = [](const AdaptationTrace& t) {
    return json{{"discriminator_loss", series_json(t.discriminator_loss)},
                {"generator_loss", series_json(t.generator_loss)},
                {"steps", t.steps}};
  };
  return json{{"pretrain", {{"epoch_loss", series_json(pretrain.epoch_loss)}}},
              {"retriever", {{"epoch_loss", series_json(retriever.epoch_loss)}}},
              {"claim_adaptation", adaptation(claim_adaptation)},
              {"doc_adaptation", adaptation(doc_adaptation)},
              {"reader",
               {{"epoch_cross_entropy", series_json(reader.epoch_cross_entropy)},
                {"epoch_alignment", series_json(reader.epoch_alignment)},
                {"skipped_alignment_terms", reader.skipped_alignment_terms}}}}
      .dump(2);
}

Pipeline train_pipeline(const DomainCorpus& source, const DomainCorpus& target, const AdaptationConfig& cfg,
                        PipelineTraces* traces) {
  run_stage("config", [&] {
    cfg.validate();
    return 0;
  });
  PipelineTraces local;
  PipelineTraces& tr = traces != nullptr ? *traces : local;
  RunManifest manifest;
  manifest.source = source.name;
  manifest.target = target.name;
  manifest.config_text = cfg.to_text();
  manifest.seeds = {{"base", cfg.seed},
                    {"biencoder", derive_seed(cfg.seed, "pipeline.biencoder")},
                    {"reader.init", derive_seed(cfg.seed, "pipeline.reader.init")},
                    {"reader.train", derive_seed(cfg.seed, "pipeline.reader.train")}};

  BiEncoder bi = run_stage("init", [&] { return make_desk_biencoder(cfg, manifest.seeds.at("biencoder")); });
  if (cfg.pseudo_pretrain) {
    const SentenceSampler generator;
    bi = run_stage("pretrain", [&] { return pretrain_with_pseudo_queries(target.documents, generator, bi, cfg, &tr.pretrain); });
    manifest.stages.push_back("pretrain");
  }
  bi = run_stage("retriever", [&] { return train_source_biencoder(source, bi, cfg, &tr.retriever); });
  manifest.stages.push_back("retriever");
  if (!cfg.no_retriever_adapt) {
    BiEncoderAdaptation report;
    bi = run_stage("adapt", [&] { return adapt_biencoder(bi, source, target, cfg, &report); });
    tr.claim_adaptation = report.claims;
    tr.doc_adaptation = report.documents;
    manifest.stages.push_back("adapt");
  }
  DocumentIndex index = run_stage("index", [&] { return build_index(target.documents, bi.doc_encoder()); });
  manifest.stages.push_back("index");

  const auto target_claims = target.claims_in(SplitPart::kTrain);
  auto target_pairs = run_stage("pseudo_pairs", [&] {
    return build_target_pseudo_pairs(target_claims, bi.claim_encoder(), index, target.documents,
                                     static_cast<std::size_t>(cfg.pseudo_evidence_p));
  });
  manifest.stages.push_back("pseudo_pairs");
  const auto source_pairs = labeled_pairs(source, SplitPart::kTrain);
  Reader reader = run_stage("reader", [&] {
    const Reader init = make_desk_reader(cfg, source.label_set, manifest.seeds.at("reader.init"));
    return train_reader(source_pairs, target_pairs, init, cfg, manifest.seeds.at("reader.train"), &tr.reader);
  });
  manifest.stages.push_back("reader");

  Pipeline p{std::move(bi), std::move(index), target.documents, std::move(reader), cfg, std::move(manifest)};
  for (const auto& [name, bytes] : artifacts(p)) p.manifest.hashes[name] = sha256_hex(bytes);
  return p;
}

Verdict verify(const Pipeline& pipeline, const Claim& claim) {
  if (pipeline.index.size() == 0) throw NoEvidenceError("the pipeline index is empty");
  const auto hits = retrieve(claim, pipeline.index, pipeline.retriever.claim_encoder(), pipeline.k());
  std::unordered_map<std::string_view, std::size_t> positions;
  for (std::size_t i = 0; i < pipeline.documents.size(); ++i) positions.emplace(pipeline.documents[i].id, i);
  std::vector<EvidenceDocument> ranked;
  ranked.reserve(hits.size());
  for (const auto& h : hits) {
    const auto it = positions.find(h.doc_id);
    if (it == positions.end()) throw IntegrityError("indexed document '" + h.doc_id + "' is missing");
    ranked.push_back(pipeline.documents[it->second]);
  }
  const Matrix per_doc = per_doc_distributions(pipeline.reader, claim, ranked, pipeline.k(), pipeline.config);

  Verdict v;
  v.claim_id = claim.id;
  v.distribution = aggregate_ranked(per_doc, pipeline.k(), pipeline.config.uniform_ranking);
  v.label = pipeline.reader.label_set().at(static_cast<int>(argmax_first(v.distribution)));
  for (std::size_t j = 0; j < hits.size(); ++j) {
    v.evidence.push_back({hits[j].doc_id, hits[j].score, per_doc.row(static_cast<Index>(j)).transpose()});
  }
  return v;
}

void save_pipeline(const Pipeline& pipeline, const std::filesystem::path& dir, const PipelineTraces* traces) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, bytes] : artifacts(pipeline)) write_file(dir / name, bytes);
  write_file(dir / kManifestFile, pipeline.manifest.to_json() + "\n");
  if (traces != nullptr) write_file(dir / kTracesFile, traces->to_json() + "\n");
}

Pipeline load_pipeline(const std::filesystem::path& dir) {
  const RunManifest manifest = RunManifest::from_json(read_file(dir / kManifestFile));
  std::map<std::string, std::string> bytes;
  for (const char* name : {kClaimEncoderFile, kDocEncoderFile, kReaderEncoderFile, kReaderHeadFile, kIndexFile,
                           kDocumentsFile, kConfigFile}) {
    bytes[name] = read_file(dir / name);
    const auto expected = manifest.hashes.find(name);
    if (expected != manifest.hashes.end() && expected->second != sha256_hex(bytes[name])) {
      throw CheckpointError(std::string("hash mismatch for ") + name);
    }
  }
  AdaptationConfig cfg = parse_config(bytes[kConfigFile]);
  BiEncoder bi(encoder_from_checkpoint(deserialize_checkpoint(bytes[kClaimEncoderFile])),
               encoder_from_checkpoint(deserialize_checkpoint(bytes[kDocEncoderFile])));
  DocumentIndex index = deserialize_index(bytes[kIndexFile]);
  if (index.encoder_hash != parameter_hash(bi.doc_encoder())) {
    throw CheckpointError("index was built with a different document encoder");
  }
  ClassifierHead head = head_from_checkpoint(deserialize_checkpoint(bytes[kReaderHeadFile]));
  const LabelSet labels = LabelSet::with_classes(head.num_classes());
  Reader reader(encoder_from_checkpoint(deserialize_checkpoint(bytes[kReaderEncoderFile])), std::move(head), labels);
  return Pipeline{std::move(bi), std::move(index), parse_documents_jsonl(bytes[kDocumentsFile]), std::move(reader),
                  std::move(cfg), manifest};
}

}  // namespace factda
