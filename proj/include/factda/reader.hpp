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

// Veracity reader over claim/evidence pairs: cross-entropy on labeled source
// pairs, correlation alignment between source and target encodings, and
// reversal augmentation (document before claim).

#ifndef FACTDA_READER_HPP_
#define FACTDA_READER_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factda/config.hpp"
#include "factda/data.hpp"
#include "factda/encoders.hpp"
#include "factda/retriever.hpp"
#include "factda/types.hpp"

namespace factda {

enum class InputOrder { kDirect, kReverse };
enum class Origin { kSource, kTarget };

struct ReaderPair {
  std::string claim_text;
  std::string doc_text;
  std::optional<VeracityLabel> label;
};

/// Two text segments joined by the separator token. A direct input holds
/// (claim, document); a reverse input holds (document, claim).
struct ReaderInput {
  std::string first;
  std::string second;
  InputOrder order = InputOrder::kDirect;
  Origin origin = Origin::kSource;
  std::optional<VeracityLabel> label;

  std::string text() const;
};

/// Direct input for a pair with the claim and document truncated to their caps.
ReaderInput make_input(const ReaderPair& pair, Origin origin, std::size_t claim_cap, std::size_t doc_cap);

/// Same segments swapped, order flipped, label kept.
ReaderInput reversed(const ReaderInput& input);

/// Each input followed by its reversal; the output is twice as long.
std::vector<ReaderInput> augment_reverse(std::span<const ReaderInput> inputs);

class Reader {
 public:
  Reader(std::unique_ptr<TextEncoder> encoder, ClassifierHead head, LabelSet label_set);
  Reader(const Reader& other);
  Reader& operator=(const Reader& other);
  Reader(Reader&&) noexcept = default;
  Reader& operator=(Reader&&) noexcept = default;

  TextEncoder& encoder() { return *encoder_; }
  const TextEncoder& encoder() const { return *encoder_; }
  ClassifierHead& head() { return head_; }
  const ClassifierHead& head() const { return head_; }
  const LabelSet& label_set() const { return label_set_; }

  /// One class distribution per text.
  Matrix predict_texts(std::span<const std::string> texts) const;

 private:
  std::unique_ptr<TextEncoder> encoder_;
  ClassifierHead head_;
  LabelSet label_set_;
};

Reader make_desk_reader(const AdaptationConfig& cfg, const LabelSet& label_set, std::uint64_t seed);

struct ReaderLossTerms {
  double cross_entropy = 0.0;
  double align_direct = 0.0;
  double align_reverse = 0.0;
  double total = 0.0;
  /// One entry per alignment term skipped because a sub-batch had fewer
  /// than 2 rows.
  std::vector<std::string> warnings;
};

struct ReaderGradient {
  Vector encoder;
  Vector head;
};

/// Mean cross-entropy over `labeled` plus lambda1 * CORAL over the direct
/// sub-batches and lambda2 * CORAL over the reverse sub-batches of the two
/// unlabeled sets. Accumulates gradients into `grad` when non-null.
ReaderLossTerms reader_loss(const Reader& reader, std::span<const ReaderInput> labeled,
                            std::span<const ReaderInput> unlabeled_source,
                            std::span<const ReaderInput> unlabeled_target, double lambda1, double lambda2,
                            ReaderGradient* grad = nullptr);

/// Unlabeled (target claim, document) pairs from the `p` top-ranked
/// documents of each claim.
std::vector<ReaderPair> build_target_pseudo_pairs(std::span<const Claim> claims, const TextEncoder& claim_encoder,
                                                  const DocumentIndex& index,
                                                  std::span<const EvidenceDocument> documents, std::size_t p);

/// Every (claim, evidence document) pair of the labeled claims in `part`.
std::vector<ReaderPair> labeled_pairs(const DomainCorpus& corpus, SplitPart part);

struct ReaderTrace {
  std::vector<double> epoch_cross_entropy;
  std::vector<double> epoch_alignment;
  std::size_t skipped_alignment_terms = 0;
};

/// Stochastic minimization of reader_loss over `cfg.reader_epochs` epochs.
/// Alignment is disabled by `cfg.no_align` or `cfg.no_reader_adapt`, reversal
/// by `cfg.no_reverse` or `cfg.no_reader_adapt`.
Reader train_reader(std::span<const ReaderPair> source_pairs, std::span<const ReaderPair> target_pairs,
                    const Reader& init, const AdaptationConfig& cfg, std::uint64_t seed,
                    ReaderTrace* trace = nullptr);

/// Class distribution for the direct input; with `dual_order` the mean of
/// the direct and reverse distributions.
Vector predict_pair(const Reader& reader, const Claim& claim, const EvidenceDocument& doc,
                    const AdaptationConfig& cfg);
Vector predict_pair(const Reader& reader, std::string_view claim_text, std::string_view doc_text,
                    const AdaptationConfig& cfg);

}  // namespace factda

#endif  // FACTDA_READER_HPP_
