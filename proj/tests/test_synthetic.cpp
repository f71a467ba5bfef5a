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

#include "factda/synthetic.hpp"
#include "factda/text.hpp"

using namespace factda;

TEST_CASE("synthetic corpus shape") {
  SyntheticWorldOptions o;
  o.claims = 50;
  const DomainCorpus c = make_synthetic_corpus(o, "Alpha", 3);
  CHECK_NOTHROW(c.validate());
  CHECK(c.name == "Alpha");
  CHECK(c.claim_count() == 50);
  CHECK(c.documents.size() == 100);
  CHECK(c.labeled_in(SplitPart::kTrain).size() == 30);
  CHECK(c.labeled_claims.front().claim.id == "ac0");
  for (const auto& lc : c.labeled_claims) {
    const auto claim = tokenize(lc.claim.text);
    CHECK(claim.size() == o.entities_per_claim + o.claim_background);
    for (const auto& id : lc.evidence_ids) {
      const auto doc = tokenize(c.document(id).text);
      CHECK(doc.size() == o.entities_per_claim + o.doc_background + o.doc_markers);
      for (const auto& w : claim) {
        if (w.starts_with("ent")) CHECK(std::find(doc.begin(), doc.end(), w) != doc.end());
      }
    }
  }
  CHECK(make_synthetic_corpus(o, "Alpha", 3).documents == c.documents);
}

TEST_CASE("markers follow the label without noise") {
  SyntheticWorldOptions o;
  o.claims = 30;
  o.marker_noise = 0.0;
  const DomainCorpus c = make_synthetic_corpus(o, "Alpha", 4);
  for (const auto& lc : c.labeled_claims) {
    const std::string want = lc.label == VeracityLabel::kSupport ? "cfm" : "dny";
    const std::string avoid = lc.label == VeracityLabel::kSupport ? "dny" : "cfm";
    for (const auto& id : lc.evidence_ids) {
      for (const auto& w : tokenize(c.document(id).text)) CHECK_FALSE(w.starts_with(avoid));
      CHECK(c.document(id).text.find(want) != std::string::npos);
    }
  }
}

TEST_CASE("target renames background words only") {
  SyntheticWorldOptions o;
  o.claims = 30;
  const SyntheticWorld w = make_synthetic_world(o, 9);
  CHECK(w.source.name == "Source");
  CHECK(w.target.name == "Target");
  CHECK_NOTHROW(w.target.validate());
  bool saw_target_word = false;
  for (const auto& d : w.target.documents) {
    CHECK(d.domain == "Target");
    for (const auto& t : tokenize(d.text)) {
      CHECK_FALSE(t.starts_with("sbg"));
      saw_target_word = saw_target_word || t.starts_with("tbg");
    }
  }
  CHECK(saw_target_word);

  o.shift_entities = true;
  const SyntheticWorld shifted = make_synthetic_world(o, 9);
  CHECK(shifted.target.documents.front().text.find("tent") != std::string::npos);
}

TEST_CASE("vocabulary substitution") {
  DomainCorpus c;
  c.name = "A";
  c.documents = {{"d1", "foo bar foo", "A"}};
  const DomainCorpus out = substitute_vocabulary(c, {{"foo", "qux"}}, "B");
  CHECK(out.name == "B");
  CHECK(out.documents[0].text == "qux bar qux");
  CHECK(out.documents[0].domain == "B");
}
