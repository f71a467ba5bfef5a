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

// Bi-encoder dense retrieval: contrastive training on labeled source data,
// adversarial adaptation of the claim and document encoders to an
// unlabeled target domain, pseudo-query pretraining and exact top-k search.

#ifndef FACTDA_RETRIEVER_HPP_
#define FACTDA_RETRIEVER_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "factda/config.hpp"
#include "factda/data.hpp"
#include "factda/encoders.hpp"
#include "factda/types.hpp"

namespace factda {

/// Claim encoder f_c and document encoder f_d with a shared output width;
/// relevance is the raw dot product f_c(c) . f_d(d).
class BiEncoder {
 public:
  BiEncoder(std::unique_ptr<TextEncoder> claim_encoder, std::unique_ptr<TextEncoder> doc_encoder);
  BiEncoder(const BiEncoder& other);
  BiEncoder& operator=(const BiEncoder& other);
  BiEncoder(BiEncoder&&) noexcept = default;
  BiEncoder& operator=(BiEncoder&&) noexcept = default;

  TextEncoder& claim_encoder() { return *claim_; }
  const TextEncoder& claim_encoder() const { return *claim_; }
  TextEncoder& doc_encoder() { return *doc_; }
  const TextEncoder& doc_encoder() const { return *doc_; }
  Index dim() const { return claim_->output_dim(); }

 private:
  std::unique_ptr<TextEncoder> claim_;
  std::unique_ptr<TextEncoder> doc_;
};

/// Desk bi-encoder whose two encoders start from identical parameters.
BiEncoder make_desk_biencoder(const AdaptationConfig& cfg, std::uint64_t seed);

double similarity(const BiEncoder& bi, const Claim& claim, const EvidenceDocument& doc);

struct TrainingPair {
  std::string claim_text;
  std::string doc_text;
};

/// Sum over claims of -log softmax of the positive's similarity, with every
/// other in-batch positive as a negative (r = batch size - 1).
double contrastive_loss(const BiEncoder& bi, std::span<const TrainingPair> batch);

/// Same loss with explicitly supplied negatives: `negatives[i]` are the
/// r irrelevant documents of claim i.
double contrastive_loss(const BiEncoder& bi, std::span<const TrainingPair> batch,
                        std::span<const std::vector<std::string>> negatives);

struct TrainingTrace {
  /// Mean per-claim loss of each epoch.
  std::vector<double> epoch_loss;
};

/// Positive example sets: the relevant documents of each training claim.
struct PositiveSet {
  std::string claim_text;
  std::vector<std::string> doc_texts;
  /// Indexes into the negative pool that must not be sampled as negatives.
  std::vector<std::size_t> excluded;
};

/// Minimizes the contrastive loss over `examples` for `epochs` passes; a
/// positive is drawn from each claim's set every epoch. `negative_pool` is
/// only used in sampled-negative mode. With `cfg.tied_encoders` the claim
/// encoder's parameters serve both sides and are copied to the document
/// encoder at the end.
BiEncoder train_biencoder(std::span<const PositiveSet> examples, std::span<const std::string> negative_pool,
                          const BiEncoder& init, const AdaptationConfig& cfg, int epochs,
                          std::uint64_t seed, TrainingTrace* trace = nullptr);

/// Trains on the labeled claims of the corpus' train split.
BiEncoder train_source_biencoder(const DomainCorpus& source, const BiEncoder& init,
                                 const AdaptationConfig& cfg, TrainingTrace* trace = nullptr);

struct AdaptationTrace {
  std::vector<double> discriminator_loss;
  std::vector<double> generator_loss;
  /// Generator steps actually applied (warm-up steps are excluded).
  int steps = 0;
};

/// Adversarially trains a copy of `target_init` so that the discriminator
/// cannot tell its outputs on `target_texts` from `source`'s outputs on
/// `source_texts`. Each iteration takes one discriminator step and one
/// encoder step, after `cfg.adapt_warmup` discriminator-only steps. The
/// source encoder is never modified.
std::unique_ptr<TextEncoder> adapt_encoder(const TextEncoder& source, const TextEncoder& target_init,
                                           Discriminator& discriminator,
                                           std::span<const std::string> source_texts,
                                           std::span<const std::string> target_texts,
                                           const AdaptationConfig& cfg, std::uint64_t seed,
                                           AdaptationTrace* trace = nullptr);

/// One adversarial game: a discriminator separating `source` outputs on
/// `source_texts` from target-encoder outputs on `target_texts`. Target
/// texts are featurized (and truncated) by `source`.
struct AdversarialStream {
  const TextEncoder* source = nullptr;
  Discriminator* discriminator = nullptr;
  std::span<const std::string> source_texts;
  std::span<const std::string> target_texts;
  AdaptationTrace* trace = nullptr;
};

/// Adapts one target encoder against several discriminators at once; each
/// encoder step follows the summed generator gradient of every stream.
std::unique_ptr<TextEncoder> adapt_shared_encoder(const TextEncoder& target_init,
                                                  std::span<const AdversarialStream> streams,
                                                  const AdaptationConfig& cfg, std::uint64_t seed);

struct BiEncoderAdaptation {
  AdaptationTrace claims;
  AdaptationTrace documents;
  Discriminator claim_discriminator;
  Discriminator doc_discriminator;
};

/// Adapts the claim encoder (source vs target claims) and, unless
/// `cfg.no_doc_adapt`, the document encoder (source vs target documents).
/// With `cfg.tied_encoders` both games update one shared target encoder.
/// Only target train-split claims are used.
BiEncoder adapt_biencoder(const BiEncoder& source_bi, const DomainCorpus& source, const DomainCorpus& target,
                          const AdaptationConfig& cfg, BiEncoderAdaptation* report = nullptr);

/// Produces claim-like texts from an unlabeled document.
class PseudoQueryGenerator {
 public:
  virtual ~PseudoQueryGenerator() = default;
  /// Exactly `n` texts; implementations must never return empty strings.
  virtual std::vector<std::string> generate(const std::string& document, std::size_t n,
                                            std::uint64_t seed) const = 0;
};

/// Samples sentences of the document; falls back to clauses and then to
/// contiguous token windows when the document has fewer units than needed.
class SentenceSampler final : public PseudoQueryGenerator {
 public:
  explicit SentenceSampler(std::size_t window_tokens = 12) : window_(window_tokens) {}
  std::vector<std::string> generate(const std::string& document, std::size_t n,
                                    std::uint64_t seed) const override;

 private:
  std::size_t window_;
};

/// (pseudo claim, document) pairs, `n` per document.
std::vector<TrainingPair> make_pseudo_pairs(std::span<const EvidenceDocument> docs,
                                            const PseudoQueryGenerator& generator, std::size_t n,
                                            std::uint64_t seed);

BiEncoder pretrain_with_pseudo_queries(std::span<const EvidenceDocument> docs,
                                       const PseudoQueryGenerator& generator, const BiEncoder& init,
                                       const AdaptationConfig& cfg, TrainingTrace* trace = nullptr);

struct DocumentIndex {
  std::vector<std::string> ids;
  Matrix vectors;  // one row per document
  std::string encoder_hash;

  std::size_t size() const { return ids.size(); }
  friend bool operator==(const DocumentIndex&, const DocumentIndex&) = default;
};

DocumentIndex build_index(std::span<const EvidenceDocument> docs, const TextEncoder& doc_encoder);

inline constexpr std::uint32_t kIndexFormatVersion = 1;
std::string serialize(const DocumentIndex& index);
DocumentIndex deserialize_index(std::string_view bytes);

struct ScoredDocument {
  std::string doc_id;
  double score = 0.0;
  friend bool operator==(const ScoredDocument&, const ScoredDocument&) = default;
};

/// Exact top-k by descending dot product, ties broken by ascending id.
std::vector<ScoredDocument> retrieve(const Vector& query, const DocumentIndex& index, std::size_t k);
std::vector<ScoredDocument> retrieve(const Claim& claim, const DocumentIndex& index,
                                     const TextEncoder& claim_encoder, std::size_t k);

}  // namespace factda

#endif  // FACTDA_RETRIEVER_HPP_
