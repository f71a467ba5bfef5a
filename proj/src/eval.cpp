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

#include "factda/eval.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "factda/error.hpp"
#include "factda/metrics.hpp"

namespace factda {

using nlohmann::json;

namespace {

std::string format_number(double v, int precision) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(precision);
  out << v;
  return out.str();
}

std::string shortest(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string scenario_name(std::string_view source, std::string_view target) {
  auto initial = [](std::string_view name) {
    if (name.empty()) return std::string("?");
    return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(name.front()))));
  };
  return initial(source) + "→" + initial(target);
}

ScenarioReport make_report(std::string source, std::string target, std::string component, std::string metric,
                           std::vector<double> per_seed, std::string config_hash) {
  if (per_seed.empty()) throw ArgumentError("a report needs at least one value");
  ScenarioReport r{std::move(source), std::move(target), std::move(component), std::move(metric), 0.0, 0.0,
                   std::move(per_seed), std::move(config_hash)};
  const double n = static_cast<double>(r.per_seed.size());
  r.mean = std::accumulate(r.per_seed.begin(), r.per_seed.end(), 0.0) / n;
  if (r.per_seed.size() > 1) {
    double ss = 0.0;
    for (double v : r.per_seed) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / (n - 1.0));
  }
  return r;
}

double evaluate_retriever(const BiEncoder& bi, const DomainCorpus& corpus, SplitPart part, std::size_t k) {
  const DocumentIndex index = build_index(corpus.documents, bi.doc_encoder());
  std::vector<RankingJudgment> judgments;
  for (const auto& lc : corpus.labeled_in(part)) {
    RankingJudgment j{lc.claim.id, lc.evidence_ids, {}};
    for (const auto& hit : retrieve(lc.claim, index, bi.claim_encoder(), k)) j.ranking.push_back(hit.doc_id);
    judgments.push_back(std::move(j));
  }
  return mean_ndcg(judgments, k);
}

double evaluate_reader(const Reader& reader, const DomainCorpus& corpus, const AdaptationConfig& cfg,
                       SplitPart part) {
  const auto positions = corpus.document_positions();
  std::vector<VeracityLabel> predictions;
  std::vector<VeracityLabel> gold;
  for (const auto& lc : corpus.labeled_in(part)) {
    if (lc.evidence_ids.empty()) continue;
    Vector mean = Vector::Zero(reader.label_set().size());
    for (const auto& id : lc.evidence_ids) {
      mean += predict_pair(reader, lc.claim, corpus.documents[positions.at(id)], cfg);
    }
    mean /= static_cast<double>(lc.evidence_ids.size());
    predictions.push_back(reader.label_set().at(static_cast<int>(argmax_first(mean))));
    gold.push_back(lc.label);
  }
  return macro_f1(predictions, gold, reader.label_set());
}

double evaluate_pipeline(const Pipeline& pipeline, const DomainCorpus& corpus, SplitPart part) {
  std::vector<VeracityLabel> predictions;
  std::vector<VeracityLabel> gold;
  for (const auto& lc : corpus.labeled_in(part)) {
    predictions.push_back(verify(pipeline, lc.claim).label);
    gold.push_back(lc.label);
  }
  return macro_f1(predictions, gold, pipeline.reader.label_set());
}

std::string reports_to_json(std::span<const ScenarioReport> reports) {
  json out = json::array();
  for (const auto& r : reports) {
    out.push_back({{"scenario", r.scenario()},
                   {"source", r.source},
                   {"target", r.target},
                   {"component", r.component},
                   {"metric", r.metric},
                   {"mean", r.mean},
                   {"std", r.std},
                   {"per_seed", r.per_seed},
                   {"config_hash", r.config_hash}});
  }
  return out.dump(2) + "\n";
}

std::string reports_to_markdown(std::span<const ScenarioReport> reports) {
  std::string out = "| Scenario | Component | Metric | Mean | Std | Seeds |\n|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    out += "| " + r.scenario() + " | " + r.component + " | " + r.metric + " | " + format_number(r.mean, 3) + " | " +
           format_number(r.std, 3) + " | " + std::to_string(r.per_seed.size()) + " |\n";
  }
  return out;
}

std::string embeddings_csv(std::span<const std::string> ids, std::span<const std::string> domains,
                           const Eigen::Ref<const Matrix>& vectors) {
  if (ids.size() != domains.size() || static_cast<Index>(ids.size()) != vectors.rows()) {
    throw ArgumentError("embedding export: ids, domains and vectors differ in length");
  }
  std::string out = "id,domain";
  for (Index c = 0; c < vectors.cols(); ++c) out += ",v" + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += csv_field(ids[i]) + "," + csv_field(domains[i]);
    for (Index c = 0; c < vectors.cols(); ++c) out += "," + shortest(vectors(static_cast<Index>(i), c));
    out += '\n';
  }
  return out;
}

}  // namespace factda
