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

// Experiment harness: per-component evaluation, scenario reports and
// embedding export.

#ifndef FACTDA_EVAL_HPP_
#define FACTDA_EVAL_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factda/config.hpp"
#include "factda/data.hpp"
#include "factda/pipeline.hpp"
#include "factda/reader.hpp"
#include "factda/retriever.hpp"

namespace factda {

/// "P→S": first letters of the source and target names, upper-cased.
std::string scenario_name(std::string_view source, std::string_view target);

struct ScenarioReport {
  std::string source;
  std::string target;
  std::string component;
  std::string metric;
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single value.
  double std = 0.0;
  std::vector<double> per_seed;
  std::string config_hash;

  std::string scenario() const { return scenario_name(source, target); }
};

ScenarioReport make_report(std::string source, std::string target, std::string component, std::string metric,
                           std::vector<double> per_seed, std::string config_hash);

/// Mean NDCG@k of retrieval over every corpus document for the labeled
/// claims of `part`. Claims without relevant documents are skipped.
double evaluate_retriever(const BiEncoder& bi, const DomainCorpus& corpus, SplitPart part = SplitPart::kTest,
                          std::size_t k = 10);

/// Macro F1 when each claim is classified from the uniform average of the
/// reader outputs over its gold evidence.
double evaluate_reader(const Reader& reader, const DomainCorpus& corpus, const AdaptationConfig& cfg,
                       SplitPart part = SplitPart::kTest);

/// Macro F1 of pipeline verdicts against the gold labels of `part`.
double evaluate_pipeline(const Pipeline& pipeline, const DomainCorpus& corpus, SplitPart part = SplitPart::kTest);

std::string reports_to_json(std::span<const ScenarioReport> reports);
/// One row per report: scenario, component, metric, mean ± std.
std::string reports_to_markdown(std::span<const ScenarioReport> reports);

/// `id,domain,v0,...,v{d-1}` rows with a header line.
std::string embeddings_csv(std::span<const std::string> ids, std::span<const std::string> domains,
                           const Eigen::Ref<const Matrix>& vectors);

}  // namespace factda

#endif  // FACTDA_EVAL_HPP_
