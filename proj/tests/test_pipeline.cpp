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

#include <numeric>
#include <random>

#include <doctest.h>

#include "factda/checkpoint.hpp"
#include "factda/error.hpp"
#include "factda/pipeline.hpp"
#include "factda/synthetic.hpp"
#include "test_support.hpp"

using namespace factda;

namespace {

// Average over i = 1..k of the mean of the top-i distributions.
Vector nested_sum_oracle(const Matrix& per_doc, std::size_t k) {
  Vector out = Vector::Zero(per_doc.cols());
  for (std::size_t i = 1; i <= k; ++i) {
    Vector inner = Vector::Zero(per_doc.cols());
    for (std::size_t j = 1; j <= i; ++j) inner += per_doc.row(static_cast<Index>(j - 1)).transpose();
    out += inner / static_cast<double>(i);
  }
  return out / static_cast<double>(k);
}

Pipeline small_pipeline(AdaptationConfig cfg, PipelineTraces* traces = nullptr) {
  SyntheticWorldOptions o;
  o.claims = 40;
  const auto world = make_synthetic_world(o, 8);
  return train_pipeline(world.source, world.target, cfg, traces);
}

}  // namespace

TEST_CASE("rank weights") {
  CHECK(rank_weights(1) == std::vector<double>{1.0});
  const auto w2 = rank_weights(2);
  CHECK(w2[0] == doctest::Approx(0.75));
  CHECK(w2[1] == doctest::Approx(0.25));
  const auto w3 = rank_weights(3);
  CHECK(w3[0] == doctest::Approx(11.0 / 18.0).epsilon(1e-15));
  CHECK(w3[1] == doctest::Approx(5.0 / 18.0).epsilon(1e-15));
  CHECK(w3[2] == doctest::Approx(2.0 / 18.0).epsilon(1e-15));
  for (std::size_t k = 1; k <= 30; ++k) {
    const auto w = rank_weights(k);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t j = 1; j < k; ++j) CHECK(w[j] < w[j - 1]);
  }
  CHECK_THROWS_AS(rank_weights(0), ArgumentError);
}

TEST_CASE("rank-weighted aggregation") {
  Matrix p(3, 2);
  p << 0.9, 0.1, 0.5, 0.5, 0.1, 0.9;
  CHECK(aggregate_ranked(p, 3)(0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(aggregate_ranked(p, 3)(0) == doctest::Approx(0.6999).epsilon(1e-3));
  CHECK(aggregate_ranked(p, 3, true)(0) == doctest::Approx(0.5));
  CHECK(aggregate_ranked(p, 10) == aggregate_ranked(p, 3));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 9;
    Matrix m = testing::random_matrix(n, 3, rng).array().abs().matrix();
    for (Index r = 0; r < n; ++r) m.row(r) /= m.row(r).sum();
    const auto k = static_cast<std::size_t>(1 + trial % static_cast<int>(n));
    const Vector got = aggregate_ranked(m, k);
    CHECK((got - nested_sum_oracle(m, k)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(got.sum() == doctest::Approx(1.0));
    if (k < static_cast<std::size_t>(n)) {
      Matrix shuffled = m;
      shuffled.row(n - 1).swap(shuffled.row(static_cast<Index>(k)));
      CHECK(aggregate_ranked(shuffled, k) == got);
    }
  }
  CHECK_THROWS_AS(aggregate_ranked(Matrix(0, 2), 3), NoEvidenceError);
}

TEST_CASE("rank_weighted_predict argument checks") {
  const auto cfg = testing::tiny_config();
  const Reader reader = make_desk_reader(cfg, LabelSet::binary(), 1);
  const Claim claim{"c", "text", ""};
  const std::vector<EvidenceDocument> docs = {{"a", "x", ""}, {"b", "y", ""}};
  CHECK_THROWS_AS(rank_weighted_predict(reader, claim, {}, 3, cfg), NoEvidenceError);
  CHECK_THROWS_AS(rank_weighted_predict(reader, claim, docs, 0, cfg), ArgumentError);
  Matrix rows(2, 2);
  rows.row(0) = predict_pair(reader, claim, docs[0], cfg).transpose();
  rows.row(1) = predict_pair(reader, claim, docs[1], cfg).transpose();
  CHECK(rank_weighted_predict(reader, claim, docs, 3, cfg) == aggregate_ranked(rows, 2));
}

TEST_CASE("end-to-end pipeline") {
  auto cfg = testing::tiny_config();
  cfg.pseudo_pretrain = true;
  cfg.pretrain_epochs = 1;
  PipelineTraces traces;
  const Pipeline p = small_pipeline(cfg, &traces);
  CHECK(p.manifest.stages == std::vector<std::string>{"pretrain", "retriever", "adapt", "index", "pseudo_pairs", "reader"});
  CHECK(p.manifest.hashes.size() == 7);
  CHECK(traces.retriever.epoch_loss.size() == static_cast<std::size_t>(cfg.retriever_epochs));
  CHECK(traces.claim_adaptation.steps == cfg.adapt_steps);

  const Claim claim{"q1", p.documents.front().text, ""};
  const Verdict v = verify(p, claim);
  CHECK(v.claim_id == "q1");
  CHECK(v.evidence.size() == p.k());
  CHECK(v.distribution.sum() == doctest::Approx(1.0));
  CHECK(static_cast<Index>(class_index(v.label)) == argmax_first(v.distribution));
  const Verdict again = verify(p, claim);
  CHECK(verdict_to_json(again) == verdict_to_json(v));
  CHECK(verdict_to_json(v).find("\"evidence\"") != std::string::npos);

  SUBCASE("save and load round trip") {
    testing::TempDir dir("pipeline");
    save_pipeline(p, dir.path(), &traces);
    const Pipeline loaded = load_pipeline(dir.path());
    CHECK(loaded.manifest == p.manifest);
    CHECK(loaded.index == p.index);
    CHECK(loaded.reader.head().parameters() == p.reader.head().parameters());
    CHECK(verdict_to_json(verify(loaded, claim)) == verdict_to_json(v));
    CHECK(RunManifest::from_json(p.manifest.to_json()) == p.manifest);

    testing::TempDir other("pipeline2");
    save_pipeline(loaded, other.path());
    for (const char* f : {"claim_encoder.ckpt", "index.bin", "reader_head.ckpt", "manifest.json", "config.cfg"}) {
      CHECK(read_file(dir.path() / f) == read_file(other.path() / f));
    }
    std::string head = read_file(dir.path() / "reader_head.ckpt");
    head[head.size() / 2] ^= 0x1;
    write_file(dir.path() / "reader_head.ckpt", head);
    CHECK_THROWS_AS(load_pipeline(dir.path()), CheckpointError);
  }
  SUBCASE("training is deterministic") {
    const Pipeline q = small_pipeline(cfg);
    CHECK(q.manifest == p.manifest);
  }
}

TEST_CASE("ablations change the stage list") {
  auto cfg = testing::tiny_config();
  cfg.no_retriever_adapt = true;
  const Pipeline p = small_pipeline(cfg);
  CHECK(p.manifest.stages == std::vector<std::string>{"retriever", "index", "pseudo_pairs", "reader"});
}

TEST_CASE("stage failures name the stage") {
  auto cfg = testing::tiny_config();
  cfg.top_k = 0;
  try {
    small_pipeline(cfg);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "config");
  }
  CHECK_THROWS_AS(RunManifest::from_json("{}"), CheckpointError);
}
