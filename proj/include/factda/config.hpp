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

#ifndef FACTDA_CONFIG_HPP_
#define FACTDA_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "factda/encoders.hpp"

namespace factda {

enum class NegativeMode { kInBatch, kSampled };

/// Every hyperparameter of a run. Defaults follow the published setup where
/// one exists (batch sizes, sequence caps, alignment weights, k, pseudo
/// queries); the rest are desk-scale choices.
struct AdaptationConfig {
  std::uint64_t seed = 13;
  int num_seeds = 5;

  // Desk encoder.
  int hash_buckets = 2048;
  int embed_dim = 32;
  int hidden_dim = 64;
  int output_dim = 16;
  double embed_init_scale = 0.1;
  /// Norm of retriever outputs; 0 keeps the raw dot product scale.
  int retriever_output_norm = 0;
  /// One parameter set shared by the claim and document encoders.
  bool tied_encoders = false;
  int discriminator_hidden = 128;

  int retriever_batch = 70;
  int reader_batch = 50;
  int claim_max_len = 50;
  int doc_max_len = 200;

  double lambda1 = 0.1;
  double lambda2 = 0.1;
  int top_k = 10;
  int pseudo_evidence_p = 2;

  std::string negative_mode = "in-batch";
  int sampled_negatives = 7;

  bool pseudo_pretrain = false;
  int pseudo_queries = 3;
  int pretrain_epochs = 3;

  int retriever_epochs = 30;
  int reader_epochs = 30;
  int adapt_steps = 300;
  int adapt_warmup = 50;
  int adapt_batch = 70;

  double lr_retriever = 1e-3;
  double lr_reader = 1e-3;
  double lr_discriminator = 1e-3;
  double lr_adapt = 1e-3;
  /// Optimizer for the adapted target encoder: "adam" or "sgd".
  std::string adapt_optimizer = "adam";

  double train_fraction = 0.6;
  int evidence_per_claim = 2;

  // Ablation and variant switches.
  bool no_retriever_adapt = false;
  bool no_doc_adapt = false;
  bool no_reader_adapt = false;
  bool no_reverse = false;
  bool no_align = false;
  bool uniform_ranking = false;
  bool literal_generator_sign = false;
  bool dual_order_inference = false;
  bool disjoint_alignment_pool = false;

  NegativeMode negatives() const;
  /// True when adapt_optimizer selects plain gradient descent.
  bool adapt_with_sgd() const;
  DeskEncoderOptions encoder_options(std::size_t max_seq_len) const;
  std::size_t reader_max_len() const { return static_cast<std::size_t>(claim_max_len + doc_max_len + 1); }

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  /// Sets one field from its text form; throws ConfigError on unknown keys or
  /// malformed values.
  void set(std::string_view key, std::string_view value);

  /// Every field as `key = value` lines in declaration order.
  std::string to_text() const;

  friend bool operator==(const AdaptationConfig&, const AdaptationConfig&) = default;
};

std::vector<std::string> config_keys();

/// Parses a complete flat `key = value` file. Every key must be present.
AdaptationConfig parse_config(std::string_view text);
AdaptationConfig load_config(const std::filesystem::path& path);

}  // namespace factda

#endif  // FACTDA_CONFIG_HPP_
