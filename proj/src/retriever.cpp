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

#include "factda/retriever.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "factda/checkpoint.hpp"
#include "factda/error.hpp"
#include "factda/losses.hpp"
#include "factda/optim.hpp"
#include "factda/random.hpp"
#include "factda/text.hpp"

namespace factda {

// ---------------------------------------------------------------------------
// BiEncoder

BiEncoder::BiEncoder(std::unique_ptr<TextEncoder> claim_encoder, std::unique_ptr<TextEncoder> doc_encoder)
    : claim_(std::move(claim_encoder)), doc_(std::move(doc_encoder)) {
  if (!claim_ || !doc_) throw ConfigError("bi-encoder needs two encoders");
  if (claim_->output_dim() != doc_->output_dim()) {
    throw ConfigError("claim and document encoders must share the output dimension");
  }
}

BiEncoder::BiEncoder(const BiEncoder& other)
    : claim_(other.claim_->clone()), doc_(other.doc_->clone()) {}

BiEncoder& BiEncoder::operator=(const BiEncoder& other) {
  if (this != &other) {
    claim_ = other.claim_->clone();
    doc_ = other.doc_->clone();
  }
  return *this;
}

BiEncoder make_desk_biencoder(const AdaptationConfig& cfg, std::uint64_t seed) {
  auto options = [&](int cap) {
    DeskEncoderOptions o = cfg.encoder_options(static_cast<std::size_t>(cap));
    o.output_norm = cfg.retriever_output_norm;
    return o;
  };
  auto claim = std::make_unique<DeskEncoder>(options(cfg.claim_max_len), seed);
  auto doc = std::make_unique<DeskEncoder>(options(cfg.doc_max_len), seed);
  return BiEncoder(std::move(claim), std::move(doc));
}

double similarity(const BiEncoder& bi, const Claim& claim, const EvidenceDocument& doc) {
  return bi.claim_encoder().encode(claim.text).dot(bi.doc_encoder().encode(doc.text));
}

namespace {

std::vector<Features> featurize_all(const TextEncoder& enc, std::span<const std::string> texts) {
  std::vector<Features> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(enc.featurize(t));
  return out;
}

}  // namespace

double contrastive_loss(const BiEncoder& bi, std::span<const TrainingPair> batch) {
  if (batch.size() < 2) throw ConfigError("in-batch negatives need a batch of at least 2 pairs");
  std::vector<std::string> claims;
  std::vector<std::string> docs;
  for (const auto& p : batch) {
    claims.push_back(p.claim_text);
    docs.push_back(p.doc_text);
  }
  const Matrix q = bi.claim_encoder().encode_all(claims);
  const Matrix d = bi.doc_encoder().encode_all(docs);
  return in_batch_contrastive_loss(q * d.transpose());
}

double contrastive_loss(const BiEncoder& bi, std::span<const TrainingPair> batch,
                        std::span<const std::vector<std::string>> negatives) {
  if (negatives.size() != batch.size()) throw ConfigError("one negative list per claim is required");
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Vector q = bi.claim_encoder().encode(batch[i].claim_text);
    Matrix scores(1, static_cast<Index>(1 + negatives[i].size()));
    scores(0, 0) = q.dot(bi.doc_encoder().encode(batch[i].doc_text));
    for (std::size_t j = 0; j < negatives[i].size(); ++j) {
      scores(0, static_cast<Index>(j + 1)) = q.dot(bi.doc_encoder().encode(negatives[i][j]));
    }
    const Index positive = 0;
    total += factda::contrastive_loss(scores, std::span<const Index>(&positive, 1));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Source training

BiEncoder train_biencoder(std::span<const PositiveSet> examples, std::span<const std::string> negative_pool,
                          const BiEncoder& init, const AdaptationConfig& cfg, int epochs,
                          std::uint64_t seed, TrainingTrace* trace) {
  BiEncoder model = init;
  if (epochs <= 0) return model;
  const NegativeMode mode = cfg.negatives();
  if (examples.empty()) throw TrainingError("no training pairs");
  if (mode == NegativeMode::kInBatch && examples.size() < 2) {
    throw ConfigError("in-batch negatives need at least 2 training claims");
  }
  for (const auto& ex : examples) {
    if (ex.doc_texts.empty()) throw TrainingError("training claim without positive documents");
  }

  TextEncoder& fc = model.claim_encoder();
  TextEncoder& fd = model.doc_encoder();
  const bool tied = cfg.tied_encoders;
  if (tied && fc.parameters().size() != fd.parameters().size()) {
    throw ConfigError("tied encoders need identical architectures");
  }
  if (tied) fd.parameters() = fc.parameters();
  fc.set_training(true);
  fd.set_training(true);

  std::vector<Features> claim_features;
  std::vector<std::vector<Features>> doc_features;
  for (const auto& ex : examples) {
    claim_features.push_back(fc.featurize(ex.claim_text));
    doc_features.push_back(featurize_all(fd, ex.doc_texts));
  }
  std::vector<Features> pool_features;
  if (mode == NegativeMode::kSampled) {
    pool_features = featurize_all(fd, negative_pool);
    if (pool_features.empty()) throw ConfigError("sampled negatives need a non-empty document pool");
  }

  Adam opt_c(fc.parameters().size(), {.learning_rate = cfg.lr_retriever});
  Adam opt_d(fd.parameters().size(), {.learning_rate = cfg.lr_retriever});
  Vector grad_c(fc.parameters().size());
  Vector grad_d(fd.parameters().size());
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch_size = static_cast<std::size_t>(cfg.retriever_batch);
  const auto r = static_cast<std::size_t>(cfg.sampled_negatives);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_total = 0.0;
    std::size_t epoch_count = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t n = std::min(batch_size, order.size() - start);
      if (mode == NegativeMode::kInBatch && n < 2) continue;

      std::vector<Features> claims;
      std::vector<Features> docs;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ex = order[start + i];
        claims.push_back(claim_features[ex]);
        std::uniform_int_distribution<std::size_t> pick(0, doc_features[ex].size() - 1);
        docs.push_back(doc_features[ex][pick(rng)]);
      }
      // candidates(i, j): row of `docs` holding candidate j of claim i.
      Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> candidates;
      if (mode == NegativeMode::kSampled) {
        candidates.resize(static_cast<Index>(n), static_cast<Index>(1 + r));
        for (std::size_t i = 0; i < n; ++i) {
          const auto& excluded = examples[order[start + i]].excluded;
          candidates(static_cast<Index>(i), 0) = static_cast<Index>(i);
          std::uniform_int_distribution<std::size_t> pick(0, pool_features.size() - 1);
          for (std::size_t j = 0; j < r; ++j) {
            std::size_t neg = pick(rng);
            for (int tries = 0; tries < 64 && std::find(excluded.begin(), excluded.end(), neg) != excluded.end();
                 ++tries) {
              neg = pick(rng);
            }
            candidates(static_cast<Index>(i), static_cast<Index>(j + 1)) = static_cast<Index>(docs.size());
            docs.push_back(pool_features[neg]);
          }
        }
      }

      EncoderTrace tc;
      EncoderTrace td;
      const Matrix q = fc.forward(claims, &tc);
      const Matrix p = (tied ? fc : fd).forward(docs, &td);
      Matrix grad_q;
      Matrix grad_p;
      double loss = 0.0;
      if (mode == NegativeMode::kInBatch) {
        const Matrix scores = q * p.transpose();
        std::vector<Index> positive(n);
        std::iota(positive.begin(), positive.end(), Index{0});
        loss = factda::contrastive_loss(scores, positive);
        const Matrix grad_s = contrastive_loss_grad(scores, positive);
        grad_q = grad_s * p;
        grad_p = grad_s.transpose() * q;
      } else {
        Matrix scores(candidates.rows(), candidates.cols());
        for (Index i = 0; i < scores.rows(); ++i) {
          for (Index j = 0; j < scores.cols(); ++j) scores(i, j) = q.row(i).dot(p.row(candidates(i, j)));
        }
        const std::vector<Index> positive(n, 0);
        loss = factda::contrastive_loss(scores, positive);
        const Matrix grad_s = contrastive_loss_grad(scores, positive);
        grad_q = Matrix::Zero(q.rows(), q.cols());
        grad_p = Matrix::Zero(p.rows(), p.cols());
        for (Index i = 0; i < scores.rows(); ++i) {
          for (Index j = 0; j < scores.cols(); ++j) {
            grad_q.row(i) += grad_s(i, j) * p.row(candidates(i, j));
            grad_p.row(candidates(i, j)) += grad_s(i, j) * q.row(i);
          }
        }
      }
      grad_c.setZero();
      grad_d.setZero();
      fc.backward(tc, grad_q, grad_c);
      if (tied) {
        fc.backward(td, grad_p, grad_c);
        opt_c.step(fc.parameters(), grad_c);
      } else {
        fd.backward(td, grad_p, grad_d);
        opt_c.step(fc.parameters(), grad_c);
        opt_d.step(fd.parameters(), grad_d);
      }
      epoch_total += loss;
      epoch_count += n;
    }
    if (trace != nullptr && epoch_count > 0) trace->epoch_loss.push_back(epoch_total / double(epoch_count));
  }
  if (tied) fd.parameters() = fc.parameters();
  fc.set_training(false);
  fd.set_training(false);
  return model;
}

BiEncoder train_source_biencoder(const DomainCorpus& source, const BiEncoder& init,
                                 const AdaptationConfig& cfg, TrainingTrace* trace) {
  const auto labeled = source.labeled_in(SplitPart::kTrain);
  if (labeled.empty()) throw TrainingError("source corpus '" + source.name + "' has no labeled training claims");
  const auto positions = source.document_positions();
  std::vector<PositiveSet> examples;
  examples.reserve(labeled.size());
  for (const auto& lc : labeled) {
    PositiveSet ex;
    ex.claim_text = lc.claim.text;
    for (const auto& id : lc.evidence_ids) {
      const std::size_t pos = positions.at(id);
      ex.doc_texts.push_back(source.documents[pos].text);
      ex.excluded.push_back(pos);
    }
    examples.push_back(std::move(ex));
  }
  std::vector<std::string> pool;
  if (cfg.negatives() == NegativeMode::kSampled) {
    for (const auto& d : source.documents) pool.push_back(d.text);
  }
  return train_biencoder(examples, pool, init, cfg, cfg.retriever_epochs,
                         derive_seed(cfg.seed, "retriever.source"), trace);
}

// ---------------------------------------------------------------------------
// Adversarial adaptation

std::unique_ptr<TextEncoder> adapt_shared_encoder(const TextEncoder& target_init,
                                                  std::span<const AdversarialStream> streams,
                                                  const AdaptationConfig& cfg, std::uint64_t seed) {
  if (streams.empty()) throw ConfigError("adversarial adaptation needs at least one stream");
  for (const auto& st : streams) {
    if (st.source == nullptr || st.discriminator == nullptr) throw ConfigError("incomplete adversarial stream");
    if (st.source_texts.empty() || st.target_texts.empty()) {
      throw ConfigError("adversarial adaptation needs non-empty source and target texts");
    }
    if (st.discriminator->input_dim() != st.source->output_dim() ||
        st.source->output_dim() != target_init.output_dim()) {
      throw ConfigError("discriminator and encoders disagree on the vector width");
    }
  }
  auto target = clone_parameters(target_init);
  if (cfg.adapt_steps <= 0) return target;

  const auto objective = cfg.literal_generator_sign ? GeneratorObjective::kLiteral
                                                    : GeneratorObjective::kFoolDiscriminator;
  const auto batch = static_cast<std::size_t>(cfg.adapt_batch);

  struct State {
    Matrix source_vectors;
    std::vector<Features> target_features;
    CyclicSampler source_sampler;
    CyclicSampler target_sampler;
    Adam optimizer;
    Vector grad;
  };
  std::vector<State> states;
  states.reserve(streams.size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const auto& st = streams[i];
    const std::string tag = "adapt." + std::to_string(i);
    states.push_back({st.source->encode_all(st.source_texts), featurize_all(*st.source, st.target_texts),
                      CyclicSampler(st.source_texts.size(), derive_seed(seed, tag + ".source")),
                      CyclicSampler(st.target_texts.size(), derive_seed(seed, tag + ".target")),
                      Adam(st.discriminator->parameters().size(), {.learning_rate = cfg.lr_discriminator}),
                      Vector(st.discriminator->parameters().size())});
  }
  const bool sgd = cfg.adapt_with_sgd();
  Adam opt_t(target->parameters().size(), {.learning_rate = cfg.lr_adapt});
  Vector grad_t(target->parameters().size());
  target->set_training(true);

  auto gather = [](const std::vector<Features>& all, const std::vector<std::size_t>& idx) {
    std::vector<Features> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(all[i]);
    return out;
  };

  auto discriminator_step = [&](std::size_t i) {
    State& s = states[i];
    Discriminator& g = *streams[i].discriminator;
    const auto si = s.source_sampler.next(batch);
    Matrix vs(static_cast<Index>(si.size()), s.source_vectors.cols());
    for (std::size_t r = 0; r < si.size(); ++r) vs.row(static_cast<Index>(r)) = s.source_vectors.row(static_cast<Index>(si[r]));
    const Matrix vt = target->forward(gather(s.target_features, s.target_sampler.next(batch)), nullptr);
    const auto ps = g.forward(vs);
    const auto pt = g.forward(vt);
    const double loss = discriminator_loss(ps.prob, pt.prob);
    const auto [ds, dt] = discriminator_loss_grad(ps.prob, pt.prob);
    s.grad.setZero();
    g.backward(vs, ps, ds, &s.grad);
    g.backward(vt, pt, dt, &s.grad);
    s.optimizer.step(g.parameters(), s.grad);
    if (streams[i].trace != nullptr) streams[i].trace->discriminator_loss.push_back(loss);
  };

  for (int step = 0; step < cfg.adapt_warmup; ++step) {
    for (std::size_t i = 0; i < streams.size(); ++i) discriminator_step(i);
  }
  for (int step = 0; step < cfg.adapt_steps; ++step) {
    for (std::size_t i = 0; i < streams.size(); ++i) discriminator_step(i);
    grad_t.setZero();
    for (std::size_t i = 0; i < streams.size(); ++i) {
      State& s = states[i];
      const Discriminator& g = *streams[i].discriminator;
      EncoderTrace tt;
      const Matrix vt = target->forward(gather(s.target_features, s.target_sampler.next(batch)), &tt);
      const auto pt = g.forward(vt);
      const double loss = generator_loss(pt.prob, objective);
      const Matrix dv = g.backward(vt, pt, generator_loss_grad(pt.prob, objective), nullptr);
      target->backward(tt, dv, grad_t);
      if (streams[i].trace != nullptr) {
        streams[i].trace->generator_loss.push_back(loss);
        ++streams[i].trace->steps;
      }
    }
    if (sgd) {
      target->parameters() -= cfg.lr_adapt * grad_t;
    } else {
      opt_t.step(target->parameters(), grad_t);
    }
  }
  target->set_training(false);
  return target;
}

std::unique_ptr<TextEncoder> adapt_encoder(const TextEncoder& source, const TextEncoder& target_init,
                                           Discriminator& discriminator,
                                           std::span<const std::string> source_texts,
                                           std::span<const std::string> target_texts,
                                           const AdaptationConfig& cfg, std::uint64_t seed,
                                           AdaptationTrace* trace) {
  const AdversarialStream stream{&source, &discriminator, source_texts, target_texts, trace};
  return adapt_shared_encoder(target_init, std::span<const AdversarialStream>(&stream, 1), cfg, seed);
}

BiEncoder adapt_biencoder(const BiEncoder& source_bi, const DomainCorpus& source, const DomainCorpus& target,
                          const AdaptationConfig& cfg, BiEncoderAdaptation* report) {
  std::vector<std::string> source_claims;
  for (const auto& c : source.claims_in(SplitPart::kTrain)) source_claims.push_back(c.text);
  std::vector<std::string> target_claims;
  for (const auto& c : target.claims_in(SplitPart::kTrain)) target_claims.push_back(c.text);
  std::vector<std::string> source_docs;
  for (const auto& d : source.documents) source_docs.push_back(d.text);
  std::vector<std::string> target_docs;
  for (const auto& d : target.documents) target_docs.push_back(d.text);

  const Index dim = source_bi.dim();
  BiEncoderAdaptation local;
  BiEncoderAdaptation& out = report != nullptr ? *report : local;
  out.claim_discriminator = Discriminator(dim, cfg.discriminator_hidden, derive_seed(cfg.seed, "discriminator.claims"));
  out.doc_discriminator = Discriminator(dim, cfg.discriminator_hidden, derive_seed(cfg.seed, "discriminator.docs"));

  const AdversarialStream claims{&source_bi.claim_encoder(), &out.claim_discriminator, source_claims, target_claims,
                                 &out.claims};
  const AdversarialStream docs{&source_bi.doc_encoder(), &out.doc_discriminator, source_docs, target_docs,
                               &out.documents};

  if (cfg.tied_encoders) {
    std::vector<AdversarialStream> streams{claims};
    if (!cfg.no_doc_adapt) streams.push_back(docs);
    auto shared = adapt_shared_encoder(source_bi.claim_encoder(), streams, cfg, derive_seed(cfg.seed, "adapt.shared"));
    auto doc_encoder = clone_parameters(source_bi.doc_encoder());
    doc_encoder->parameters() = shared->parameters();
    return BiEncoder(std::move(shared), std::move(doc_encoder));
  }
  auto claim_encoder = adapt_shared_encoder(source_bi.claim_encoder(), std::span<const AdversarialStream>(&claims, 1),
                                            cfg, derive_seed(cfg.seed, "adapt.claims"));
  auto doc_encoder = cfg.no_doc_adapt
                         ? clone_parameters(source_bi.doc_encoder())
                         : adapt_shared_encoder(source_bi.doc_encoder(), std::span<const AdversarialStream>(&docs, 1),
                                                cfg, derive_seed(cfg.seed, "adapt.docs"));
  return BiEncoder(std::move(claim_encoder), std::move(doc_encoder));
}

// ---------------------------------------------------------------------------
// Pseudo queries

namespace {

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_units(const std::vector<std::string>& pieces, std::string_view delimiters) {
  std::vector<std::string> out;
  for (const auto& piece : pieces) {
    std::string current;
    for (char c : piece) {
      current.push_back(c);
      if (delimiters.find(c) != std::string_view::npos) {
        if (auto t = trim_copy(current); !t.empty()) out.push_back(std::move(t));
        current.clear();
      }
    }
    if (auto t = trim_copy(current); !t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<std::string> SentenceSampler::generate(const std::string& document, std::size_t n,
                                                   std::uint64_t seed) const {
  if (n == 0) return {};
  std::vector<std::string> units = split_units({document}, ".!?\n");
  if (units.size() < n) units = split_units(units, ",;:");
  if (units.size() < n) {
    const auto tokens = tokenize(document);
    std::vector<std::string> windows;
    for (std::size_t start = 0; start < tokens.size(); ++start) {
      const std::size_t end = std::min(tokens.size(), start + window_);
      windows.push_back(join_tokens({tokens.begin() + static_cast<std::ptrdiff_t>(start),
                                     tokens.begin() + static_cast<std::ptrdiff_t>(end)}));
      if (end == tokens.size()) break;
    }
    if (windows.size() > units.size()) units = std::move(windows);
  }
  if (units.empty()) throw GenerationError("document has no text to generate pseudo queries from");
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(n);
  while (out.size() < n) {
    std::vector<std::string> round;
    std::sample(units.begin(), units.end(), std::back_inserter(round), n - out.size(), rng);
    out.insert(out.end(), round.begin(), round.end());
  }
  return out;
}

std::vector<TrainingPair> make_pseudo_pairs(std::span<const EvidenceDocument> docs,
                                            const PseudoQueryGenerator& generator, std::size_t n,
                                            std::uint64_t seed) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(docs.size() * n);
  for (const auto& d : docs) {
    auto queries = generator.generate(d.text, n, derive_seed(seed, d.id));
    if (queries.size() != n) throw GenerationError("generator returned a wrong number of pseudo queries");
    for (auto& q : queries) {
      if (trim_copy(q).empty()) throw GenerationError("generator returned an empty pseudo query for '" + d.id + "'");
      pairs.push_back({std::move(q), d.text});
    }
  }
  return pairs;
}

BiEncoder pretrain_with_pseudo_queries(std::span<const EvidenceDocument> docs,
                                       const PseudoQueryGenerator& generator, const BiEncoder& init,
                                       const AdaptationConfig& cfg, TrainingTrace* trace) {
  if (docs.empty()) throw TrainingError("pseudo-query pretraining needs documents");
  if (cfg.pretrain_epochs <= 0) return init;
  const auto pairs = make_pseudo_pairs(docs, generator, static_cast<std::size_t>(cfg.pseudo_queries),
                                       derive_seed(cfg.seed, "pseudo.generate"));
  std::vector<PositiveSet> examples;
  std::vector<std::string> pool;
  examples.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::size_t doc_pos = i / static_cast<std::size_t>(cfg.pseudo_queries);
    examples.push_back({pairs[i].claim_text, {pairs[i].doc_text}, {doc_pos}});
  }
  for (const auto& d : docs) pool.push_back(d.text);
  return train_biencoder(examples, pool, init, cfg, cfg.pretrain_epochs, derive_seed(cfg.seed, "pseudo.train"),
                         trace);
}

// ---------------------------------------------------------------------------
// Index and search

DocumentIndex build_index(std::span<const EvidenceDocument> docs, const TextEncoder& doc_encoder) {
  DocumentIndex index;
  index.encoder_hash = parameter_hash(doc_encoder);
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const auto& d : docs) {
    index.ids.push_back(d.id);
    texts.push_back(d.text);
  }
  index.vectors = docs.empty() ? Matrix(0, doc_encoder.output_dim()) : doc_encoder.encode_all(texts);
  return index;
}

std::string serialize(const DocumentIndex& index) {
  std::string out("FDINDX01");
  binio::put_u32(out, kIndexFormatVersion);
  binio::put_str(out, index.encoder_hash);
  binio::put_u64(out, index.ids.size());
  binio::put_u64(out, static_cast<std::uint64_t>(index.vectors.cols()));
  for (std::size_t i = 0; i < index.ids.size(); ++i) {
    binio::put_str(out, index.ids[i]);
    for (Index j = 0; j < index.vectors.cols(); ++j) binio::put_f64(out, index.vectors(static_cast<Index>(i), j));
  }
  return out;
}

DocumentIndex deserialize_index(std::string_view bytes) {
  binio::Reader in(bytes);
  in.expect_magic("FDINDX01");
  if (in.u32() != kIndexFormatVersion) throw CheckpointError("unsupported index format version");
  DocumentIndex index;
  index.encoder_hash = in.str();
  const auto rows = in.u64();
  const auto cols = in.u64();
  // Each row stores at least a length-prefixed id and `cols` doubles.
  if (rows > in.remaining() / (8 * (cols + 1))) throw CheckpointError("index header exceeds the file");
  const auto n = static_cast<Index>(rows);
  const auto dim = static_cast<Index>(cols);
  index.vectors.resize(n, dim);
  for (Index i = 0; i < n; ++i) {
    index.ids.push_back(in.str());
    for (Index j = 0; j < dim; ++j) index.vectors(i, j) = in.f64();
  }
  if (!in.at_end()) throw CheckpointError("trailing bytes after index");
  return index;
}

std::vector<ScoredDocument> retrieve(const Vector& query, const DocumentIndex& index, std::size_t k) {
  if (k == 0) throw ConfigError("retrieve needs k >= 1");
  const Vector scores = index.vectors * query;
  std::vector<std::size_t> order(index.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t keep = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double sa = scores(static_cast<Index>(a));
                      const double sb = scores(static_cast<Index>(b));
                      if (sa != sb) return sa > sb;
                      return index.ids[a] < index.ids[b];
                    });
  std::vector<ScoredDocument> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back({index.ids[order[i]], scores(static_cast<Index>(order[i]))});
  return out;
}

std::vector<ScoredDocument> retrieve(const Claim& claim, const DocumentIndex& index,
                                     const TextEncoder& claim_encoder, std::size_t k) {
  return retrieve(claim_encoder.encode(claim.text), index, k);
}

}  // namespace factda
