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

#include "factda/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "factda/random.hpp"
#include "factda/text.hpp"

namespace factda {

namespace {

std::string word(const std::string& stem, std::size_t i) { return stem + std::to_string(i); }

}  // namespace

DomainCorpus make_synthetic_corpus(const SyntheticWorldOptions& o, const std::string& name, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> weights(o.background_vocab);
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 1.0 / std::pow(double(i + 1), o.background_zipf);
  std::discrete_distribution<std::size_t> background(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> marker(0, o.marker_vocab - 1);
  std::bernoulli_distribution flip(o.marker_noise);
  std::bernoulli_distribution supported(o.support_fraction);
  std::vector<std::size_t> entity_ids(o.entity_vocab);
  std::iota(entity_ids.begin(), entity_ids.end(), std::size_t{0});

  const std::string prefix = name.empty() ? std::string("x") : std::string(1, char(std::tolower(name[0])));
  auto background_words = [&](std::size_t n, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(word("sbg", background(rng)));
  };

  DomainCorpus corpus;
  corpus.name = name;
  corpus.label_set = LabelSet::binary();
  for (std::size_t c = 0; c < o.claims; ++c) {
    std::vector<std::size_t> chosen;
    std::sample(entity_ids.begin(), entity_ids.end(), std::back_inserter(chosen), o.entities_per_claim, rng);
    std::shuffle(chosen.begin(), chosen.end(), rng);
    const VeracityLabel label = supported(rng) ? VeracityLabel::kSupport : VeracityLabel::kRefute;

    std::vector<std::string> claim_words;
    for (auto e : chosen) claim_words.push_back(word("ent", e));
    background_words(o.claim_background, claim_words);
    std::shuffle(claim_words.begin(), claim_words.end(), rng);

    LabeledClaim lc;
    lc.claim = {word(prefix + "c", c), join_tokens(claim_words), name};
    lc.label = label;
    for (std::size_t d = 0; d < o.docs_per_claim; ++d) {
      std::vector<std::string> doc_words;
      for (auto e : chosen) doc_words.push_back(word("ent", e));
      background_words(o.doc_background, doc_words);
      for (std::size_t m = 0; m < o.doc_markers; ++m) {
        const bool confirm = (label == VeracityLabel::kSupport) != flip(rng);
        doc_words.push_back(word(confirm ? "cfm" : "dny", marker(rng)));
      }
      std::shuffle(doc_words.begin(), doc_words.end(), rng);
      EvidenceDocument doc{word(prefix + "d", c * o.docs_per_claim + d), join_tokens(doc_words), name};
      lc.evidence_ids.push_back(doc.id);
      corpus.documents.push_back(std::move(doc));
    }
    corpus.labeled_claims.push_back(std::move(lc));
  }
  return split_corpus(corpus, o.train_fraction, derive_seed(seed, "split"));
}

DomainCorpus substitute_vocabulary(const DomainCorpus& corpus, const std::map<std::string, std::string>& mapping,
                                   const std::string& name) {
  auto rename = [&](const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string tok; in >> tok;) {
      const auto it = mapping.find(tok);
      out.push_back(it == mapping.end() ? tok : it->second);
    }
    return join_tokens(out);
  };
  DomainCorpus out = corpus;
  out.name = name;
  for (auto& lc : out.labeled_claims) {
    lc.claim.text = rename(lc.claim.text);
    lc.claim.domain = name;
  }
  for (auto& c : out.unlabeled_claims) {
    c.text = rename(c.text);
    c.domain = name;
  }
  for (auto& d : out.documents) {
    d.text = rename(d.text);
    d.domain = name;
  }
  return out;
}

SyntheticWorld make_synthetic_world(const SyntheticWorldOptions& options, std::uint64_t seed) {
  SyntheticWorld world;
  world.source = make_synthetic_corpus(options, "Source", derive_seed(seed, "world.source"));
  std::map<std::string, std::string> mapping;
  for (std::size_t i = 0; i < options.background_vocab; ++i) mapping.emplace(word("sbg", i), word("tbg", i));
  if (options.shift_entities) {
    for (std::size_t i = 0; i < options.entity_vocab; ++i) mapping.emplace(word("ent", i), word("tent", i));
  }
  world.target = substitute_vocabulary(make_synthetic_corpus(options, "Target", derive_seed(seed, "world.target")),
                                       mapping, "Target");
  return world;
}

}  // namespace factda
