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

// End-to-end pipeline: source retriever training, adversarial adaptation,
// target indexing, pseudo-evidence construction, reader training and
// rank-weighted verification.

#ifndef FACTDA_PIPELINE_HPP_
#define FACTDA_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "factda/config.hpp"
#include "factda/data.hpp"
#include "factda/reader.hpp"
#include "factda/retriever.hpp"
#include "factda/types.hpp"

namespace factda {

/// w_j = (1/k) * sum_{i=j..k} 1/i for j = 1..k. Throws ArgumentError for k = 0.
std::vector<double> rank_weights(std::size_t k);

/// Combines per-document distributions (one row per ranked document) over
/// the first min(k, rows) rows with rank weights, or uniformly.
Vector aggregate_ranked(const Eigen::Ref<const Matrix>& per_doc, std::size_t k, bool uniform = false);

/// Rank-weighted class distribution of a claim given its ranked documents.
/// Throws NoEvidenceError when `ranked_docs` is empty.
Vector rank_weighted_predict(const Reader& reader, const Claim& claim,
                             std::span<const EvidenceDocument> ranked_docs, std::size_t k,
                             const AdaptationConfig& cfg);

struct EvidenceTrace {
  std::string doc_id;
  double score = 0.0;
  Vector distribution;
};

struct Verdict {
  std::string claim_id;
  VeracityLabel label = VeracityLabel::kSupport;
  Vector distribution;
  std::vector<EvidenceTrace> evidence;
};

/// `{claim_id, label, distribution, evidence:[{doc_id, score, distribution}]}`.
std::string verdict_to_json(const Verdict& verdict);

struct RunManifest {
  std::string source;
  std::string target;
  std::map<std::string, std::uint64_t> seeds;
  std::string config_text;
  std::vector<std::string> stages;
  std::map<std::string, std::string> hashes;

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

struct PipelineTraces {
  TrainingTrace pretrain;
  TrainingTrace retriever;
  AdaptationTrace claim_adaptation;
  AdaptationTrace doc_adaptation;
  ReaderTrace reader;

  std::string to_json() const;
};

struct Pipeline {
  BiEncoder retriever;
  DocumentIndex index;
  std::vector<EvidenceDocument> documents;
  Reader reader;
  AdaptationConfig config;
  RunManifest manifest;

  std::size_t k() const { return static_cast<std::size_t>(config.top_k); }
};

/// Runs every stage on the source corpus and the target's unlabeled data.
/// Target labels are never read. Stage failures are rethrown as StageError.
Pipeline train_pipeline(const DomainCorpus& source, const DomainCorpus& target, const AdaptationConfig& cfg,
                        PipelineTraces* traces = nullptr);

/// Retrieves the top k target documents and aggregates reader outputs.
Verdict verify(const Pipeline& pipeline, const Claim& claim);

/// Writes checkpoints, index, documents, config, manifest and traces.
void save_pipeline(const Pipeline& pipeline, const std::filesystem::path& dir,
                   const PipelineTraces* traces = nullptr);
Pipeline load_pipeline(const std::filesystem::path& dir);

}  // namespace factda

#endif  // FACTDA_PIPELINE_HPP_
