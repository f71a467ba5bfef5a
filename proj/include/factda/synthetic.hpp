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

// Synthetic cross-domain fact-checking worlds. A claim names a few entities;
// each of its evidence documents repeats those entities and carries label
// marker words whose majority family decides the veracity. The target domain
// is the same generative process with its background vocabulary renamed by
// a bijection, so every target-only word is unseen during source training.

#ifndef FACTDA_SYNTHETIC_HPP_
#define FACTDA_SYNTHETIC_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "factda/data.hpp"

namespace factda {

/// Defaults describe the shift benchmark: a handful of frequent background
/// words per domain, renamed in the target, over a shared entity vocabulary.
struct SyntheticWorldOptions {
  std::size_t claims = 500;
  std::size_t docs_per_claim = 2;
  std::size_t entity_vocab = 300;
  std::size_t entities_per_claim = 3;
  std::size_t background_vocab = 2;
  /// Zipf exponent of background word frequencies; 0 is uniform.
  double background_zipf = 0.0;
  std::size_t claim_background = 4;
  std::size_t doc_background = 12;
  std::size_t marker_vocab = 6;
  std::size_t doc_markers = 3;
  /// Probability that a marker comes from the family opposite to the label.
  double marker_noise = 0.1;
  double support_fraction = 0.5;
  /// Rename entity words in the target as well as background words.
  bool shift_entities = false;
  double train_fraction = 0.6;
};

struct SyntheticWorld {
  DomainCorpus source;
  DomainCorpus target;
};

/// One split corpus whose background words are `<prefix>bg<N>`.
DomainCorpus make_synthetic_corpus(const SyntheticWorldOptions& options, const std::string& name,
                                   std::uint64_t seed);

/// Renames whitespace tokens of every claim and document text through
/// `mapping` (tokens absent from it are kept) and renames the corpus.
DomainCorpus substitute_vocabulary(const DomainCorpus& corpus, const std::map<std::string, std::string>& mapping,
                                   const std::string& name);

/// Source corpus plus a target built from an independent sample whose
/// background words `sbgN` are renamed to `tbgN`.
SyntheticWorld make_synthetic_world(const SyntheticWorldOptions& options, std::uint64_t seed);

}  // namespace factda

#endif  // FACTDA_SYNTHETIC_HPP_
