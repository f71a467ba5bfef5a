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

#include <doctest.h>

#include "factda/config.hpp"
#include "factda/error.hpp"

using namespace factda;

TEST_CASE("defaults follow the published hyperparameters") {
  const AdaptationConfig cfg;
  CHECK(cfg.retriever_batch == 70);
  CHECK(cfg.reader_batch == 50);
  CHECK(cfg.claim_max_len == 50);
  CHECK(cfg.doc_max_len == 200);
  CHECK(cfg.lambda1 == 0.1);
  CHECK(cfg.lambda2 == 0.1);
  CHECK(cfg.top_k == 10);
  CHECK(cfg.pseudo_evidence_p == 2);
  CHECK(cfg.pseudo_queries == 3);
  CHECK(cfg.pretrain_epochs == 3);
  CHECK(cfg.evidence_per_claim == 2);
  CHECK(cfg.num_seeds == 5);
  CHECK(cfg.negatives() == NegativeMode::kInBatch);
  CHECK_FALSE(cfg.adapt_with_sgd());
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("text form round-trips exactly") {
  AdaptationConfig cfg;
  cfg.lr_adapt = 0.1 + 0.2;
  cfg.tied_encoders = true;
  cfg.negative_mode = "sampled";
  cfg.adapt_optimizer = "sgd";
  const AdaptationConfig back = parse_config(cfg.to_text());
  CHECK(back == cfg);
  CHECK(cfg.to_text().find("tied_encoders = true") != std::string::npos);
}

TEST_CASE("shipped config files parse") {
  CHECK(load_config(FACTDA_SOURCE_DIR "/configs/default.cfg") == AdaptationConfig{});
  const AdaptationConfig synthetic = load_config(FACTDA_SOURCE_DIR "/configs/synthetic.cfg");
  CHECK(synthetic.tied_encoders);
  CHECK(synthetic.adapt_with_sgd());
}

TEST_CASE("parse errors name the field") {
  const std::string full = AdaptationConfig{}.to_text();
  SUBCASE("missing field") {
    std::string text = full;
    text.erase(text.find("top_k = 10\n"), 11);
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("top_k") != std::string::npos);
    }
  }
  SUBCASE("unknown field") { CHECK_THROWS_AS(parse_config(full + "bogus = 1\n"), ConfigError); }
  SUBCASE("duplicate field") { CHECK_THROWS_AS(parse_config(full + "seed = 2\n"), ConfigError); }
  SUBCASE("malformed number") {
    AdaptationConfig cfg;
    CHECK_THROWS_AS(cfg.set("top_k", "ten"), ConfigError);
    CHECK_THROWS_AS(cfg.set("lambda1", "0.1x"), ConfigError);
    CHECK_THROWS_AS(cfg.set("no_align", "yes"), ConfigError);
  }
  SUBCASE("line without equals sign") { CHECK_THROWS_AS(parse_config("seed 13\n"), ConfigError); }
}

TEST_CASE("validation rejects out-of-range values") {
  AdaptationConfig cfg;
  SUBCASE("k") { cfg.top_k = 0; }
  SUBCASE("negative lambda") { cfg.lambda1 = -0.1; }
  SUBCASE("negative mode") { cfg.negative_mode = "hard"; }
  SUBCASE("optimizer") { cfg.adapt_optimizer = "rmsprop"; }
  SUBCASE("output norm") { cfg.retriever_output_norm = -1; }
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const AdaptationConfig cfg = parse_config("# header\n\n" + AdaptationConfig{}.to_text());
  CHECK(cfg == AdaptationConfig{});
}
