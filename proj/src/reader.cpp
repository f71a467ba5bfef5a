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

#include "factda/reader.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "factda/error.hpp"
#include "factda/losses.hpp"
#include "factda/optim.hpp"
#include "factda/random.hpp"
#include "factda/text.hpp"

namespace factda {

std::string ReaderInput::text() const {
  std::string out = first;
  out += ' ';
  out += kSepToken;
  out += ' ';
  out += second;
  return out;
}

ReaderInput make_input(const ReaderPair& pair, Origin origin, std::size_t claim_cap, std::size_t doc_cap) {
  return {join_tokens(truncate_tokens(tokenize(pair.claim_text), claim_cap)),
          join_tokens(truncate_tokens(tokenize(pair.doc_text), doc_cap)), InputOrder::kDirect, origin, pair.label};
}

ReaderInput reversed(const ReaderInput& input) {
  ReaderInput out = input;
  std::swap(out.first, out.second);
  out.order = input.order == InputOrder::kDirect ? InputOrder::kReverse : InputOrder::kDirect;
  return out;
}

std::vector<ReaderInput> augment_reverse(std::span<const ReaderInput> inputs) {
  std::vector<ReaderInput> out;
  out.reserve(2 * inputs.size());
  for (const auto& x : inputs) {
    out.push_back(x);
    out.push_back(reversed(x));
  }
  return out;
}

// ---------------------------------------------------------------------------

Reader::Reader(std::unique_ptr<TextEncoder> encoder, ClassifierHead head, LabelSet label_set)
    : encoder_(std::move(encoder)), head_(std::move(head)), label_set_(label_set) {
  if (!encoder_) throw ConfigError("reader needs an encoder");
  if (head_.input_dim() != encoder_->output_dim() || head_.num_classes() != label_set_.size()) {
    throw ConfigError("reader head does not match its encoder or label set");
  }
}

Reader::Reader(const Reader& other)
    : encoder_(other.encoder_->clone()), head_(other.head_), label_set_(other.label_set_) {}

Reader& Reader::operator=(const Reader& other) {
  if (this != &other) {
    encoder_ = other.encoder_->clone();
    head_ = other.head_;
    label_set_ = other.label_set_;
  }
  return *this;
}

Matrix Reader::predict_texts(std::span<const std::string> texts) const {
  return head_.predict(encoder_->encode_all(texts));
}

Reader make_desk_reader(const AdaptationConfig& cfg, const LabelSet& label_set, std::uint64_t seed) {
  auto encoder = std::make_unique<DeskEncoder>(cfg.encoder_options(cfg.reader_max_len()),
                                               derive_seed(seed, "reader.encoder"));
  ClassifierHead head(encoder->output_dim(), label_set.size(), derive_seed(seed, "reader.head"));
  return Reader(std::move(encoder), std::move(head), label_set);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Features> featurize_inputs(const TextEncoder& enc, std::span<const ReaderInput> inputs,
                                       std::optional<InputOrder> only = std::nullopt) {
  std::vector<Features> out;
  for (const auto& x : inputs) {
    if (!only || x.order == *only) out.push_back(enc.featurize(x.text()));
  }
  return out;
}

}  // namespace

ReaderLossTerms reader_loss(const Reader& reader, std::span<const ReaderInput> labeled,
                            std::span<const ReaderInput> unlabeled_source,
                            std::span<const ReaderInput> unlabeled_target, double lambda1, double lambda2,
                            ReaderGradient* grad) {
  if (labeled.empty()) throw DegenerateBatchError("reader loss needs labeled inputs");
  const TextEncoder& enc = reader.encoder();
  const ClassifierHead& head = reader.head();
  if (grad != nullptr) {
    if (grad->encoder.size() != enc.parameters().size()) grad->encoder = Vector::Zero(enc.parameters().size());
    if (grad->head.size() != head.parameters().size()) grad->head = Vector::Zero(head.parameters().size());
  }

  ReaderLossTerms terms;
  std::vector<int> labels;
  labels.reserve(labeled.size());
  for (const auto& x : labeled) {
    if (!x.label) throw LabelError("labeled reader input without a label");
    if (!reader.label_set().contains(*x.label)) throw LabelError("reader input label outside the label set");
    labels.push_back(class_index(*x.label));
  }
  EncoderTrace trace;
  const Matrix h = enc.forward(featurize_inputs(enc, labeled), grad != nullptr ? &trace : nullptr);
  const Matrix probs = softmax_rows(head.logits(h));
  terms.cross_entropy = cross_entropy(probs, labels);
  if (grad != nullptr) {
    const Matrix dh = head.backward(h, cross_entropy_grad_logits(probs, labels), grad->head);
    enc.backward(trace, dh, grad->encoder);
  }

  auto align = [&](InputOrder order, double lambda, double& value) {
    const auto fs = featurize_inputs(enc, unlabeled_source, order);
    const auto ft = featurize_inputs(enc, unlabeled_target, order);
    if (fs.size() < 2 || ft.size() < 2) {
      if (lambda > 0.0) {
        terms.warnings.push_back(std::string(order == InputOrder::kDirect ? "direct" : "reverse") +
                                 " alignment skipped: sub-batch has fewer than 2 rows");
      }
      return;
    }
    const bool backprop = grad != nullptr && lambda > 0.0;
    EncoderTrace ts;
    EncoderTrace tt;
    const Matrix xs = enc.forward(fs, backprop ? &ts : nullptr);
    const Matrix xt = enc.forward(ft, backprop ? &tt : nullptr);
    value = coral_distance(xs, xt);
    if (backprop) {
      const auto [gs, gt] = coral_distance_grad(xs, xt);
      enc.backward(ts, lambda * gs, grad->encoder);
      enc.backward(tt, lambda * gt, grad->encoder);
    }
  };
  align(InputOrder::kDirect, lambda1, terms.align_direct);
  align(InputOrder::kReverse, lambda2, terms.align_reverse);
  terms.total = terms.cross_entropy + lambda1 * terms.align_direct + lambda2 * terms.align_reverse;
  return terms;
}

// ---------------------------------------------------------------------------

std::vector<ReaderPair> build_target_pseudo_pairs(std::span<const Claim> claims, const TextEncoder& claim_encoder,
                                                  const DocumentIndex& index,
                                                  std::span<const EvidenceDocument> documents, std::size_t p) {
  if (index.size() == 0) throw ConfigError("pseudo-evidence needs a non-empty document index");
  if (p == 0) throw ConfigError("pseudo-evidence count p must be at least 1");
  std::unordered_map<std::string, std::size_t> positions;
  for (std::size_t i = 0; i < documents.size(); ++i) positions.emplace(documents[i].id, i);
  std::vector<ReaderPair> pairs;
  pairs.reserve(claims.size() * p);
  for (const auto& c : claims) {
    for (const auto& hit : retrieve(c, index, claim_encoder, p)) {
      const auto it = positions.find(hit.doc_id);
      if (it == positions.end()) throw IntegrityError("indexed document '" + hit.doc_id + "' is missing");
      pairs.push_back({c.text, documents[it->second].text, std::nullopt});
    }
  }
  return pairs;
}

std::vector<ReaderPair> labeled_pairs(const DomainCorpus& corpus, SplitPart part) {
  const auto positions = corpus.document_positions();
  std::vector<ReaderPair> pairs;
  for (const auto& lc : corpus.labeled_in(part)) {
    for (const auto& id : lc.evidence_ids) {
      pairs.push_back({lc.claim.text, corpus.documents[positions.at(id)].text, lc.label});
    }
  }
  return pairs;
}

Reader train_reader(std::span<const ReaderPair> source_pairs, std::span<const ReaderPair> target_pairs,
                    const Reader& init, const AdaptationConfig& cfg, std::uint64_t seed, ReaderTrace* trace) {
  if (source_pairs.empty()) throw TrainingError("no labeled source pairs for the reader");
  Reader reader = init;
  if (cfg.reader_epochs <= 0) return reader;

  const bool reverse = !cfg.no_reverse && !cfg.no_reader_adapt;
  const bool align = !cfg.no_align && !cfg.no_reader_adapt && (cfg.lambda1 > 0.0 || cfg.lambda2 > 0.0);
  const auto claim_cap = static_cast<std::size_t>(cfg.claim_max_len);
  const auto doc_cap = static_cast<std::size_t>(cfg.doc_max_len);
  std::mt19937_64 rng(seed);

  std::vector<ReaderInput> direct_source;
  for (const auto& p : source_pairs) direct_source.push_back(make_input(p, Origin::kSource, claim_cap, doc_cap));
  std::vector<ReaderInput> align_source = direct_source;
  if (align && cfg.disjoint_alignment_pool) {
    std::shuffle(direct_source.begin(), direct_source.end(), rng);
    const auto half = static_cast<std::ptrdiff_t>(direct_source.size() / 2);
    if (half == 0) throw TrainingError("disjoint alignment pool needs at least 2 labeled pairs");
    align_source.assign(direct_source.begin() + half, direct_source.end());
    direct_source.resize(static_cast<std::size_t>(half));
  }
  std::vector<ReaderInput> direct_target;
  for (const auto& p : target_pairs) {
    ReaderPair unlabeled = p;
    unlabeled.label.reset();
    direct_target.push_back(make_input(unlabeled, Origin::kTarget, claim_cap, doc_cap));
  }
  for (auto& x : align_source) x.label.reset();

  const std::vector<ReaderInput> labeled = reverse ? augment_reverse(direct_source) : direct_source;
  const std::vector<ReaderInput> pool_source = reverse ? augment_reverse(align_source) : align_source;
  const std::vector<ReaderInput> pool_target = reverse ? augment_reverse(direct_target) : direct_target;
  const bool use_alignment = align && !pool_target.empty();

  TextEncoder& enc = reader.encoder();
  ClassifierHead& head = reader.head();
  enc.set_training(true);
  Adam opt_e(enc.parameters().size(), {.learning_rate = cfg.lr_reader});
  Adam opt_h(head.parameters().size(), {.learning_rate = cfg.lr_reader});
  CyclicSampler source_sampler(pool_source.size(), derive_seed(seed, "reader.align.source"));
  CyclicSampler target_sampler(std::max<std::size_t>(pool_target.size(), 1), derive_seed(seed, "reader.align.target"));
  const auto batch = static_cast<std::size_t>(cfg.reader_batch);
  const double lambda1 = use_alignment ? cfg.lambda1 : 0.0;
  const double lambda2 = use_alignment ? cfg.lambda2 : 0.0;

  std::vector<std::size_t> order(labeled.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  ReaderGradient grad;
  for (int epoch = 0; epoch < cfg.reader_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double ce_total = 0.0;
    double align_total = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      std::vector<ReaderInput> lb;
      for (std::size_t i = start; i < std::min(order.size(), start + batch); ++i) lb.push_back(labeled[order[i]]);
      std::vector<ReaderInput> us;
      std::vector<ReaderInput> ut;
      if (use_alignment) {
        for (auto i : source_sampler.next(batch)) us.push_back(pool_source[i]);
        for (auto i : target_sampler.next(batch)) ut.push_back(pool_target[i]);
      }
      grad.encoder.setZero(enc.parameters().size());
      grad.head.setZero(head.parameters().size());
      const auto terms = reader_loss(reader, lb, us, ut, lambda1, lambda2, &grad);
      if (!std::isfinite(terms.total)) throw TrainingError("reader loss diverged");
      opt_e.step(enc.parameters(), grad.encoder);
      opt_h.step(head.parameters(), grad.head);
      ce_total += terms.cross_entropy;
      align_total += terms.align_direct + terms.align_reverse;
      ++steps;
      if (trace != nullptr) trace->skipped_alignment_terms += terms.warnings.size();
    }
    if (trace != nullptr) {
      trace->epoch_cross_entropy.push_back(ce_total / double(steps));
      trace->epoch_alignment.push_back(align_total / double(steps));
    }
  }
  enc.set_training(false);
  return reader;
}

Vector predict_pair(const Reader& reader, std::string_view claim_text, std::string_view doc_text,
                    const AdaptationConfig& cfg) {
  const ReaderInput direct = make_input({std::string(claim_text), std::string(doc_text), std::nullopt},
                                        Origin::kTarget, static_cast<std::size_t>(cfg.claim_max_len),
                                        static_cast<std::size_t>(cfg.doc_max_len));
  std::vector<std::string> texts{direct.text()};
  if (cfg.dual_order_inference) texts.push_back(reversed(direct).text());
  const Matrix probs = reader.predict_texts(texts);
  return probs.colwise().mean().transpose();
}

Vector predict_pair(const Reader& reader, const Claim& claim, const EvidenceDocument& doc,
                    const AdaptationConfig& cfg) {
  return predict_pair(reader, claim.text, doc.text, cfg);
}

}  // namespace factda
