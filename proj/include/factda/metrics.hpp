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

// Classification and ranking metrics and the domain-discrepancy estimate.

#ifndef FACTDA_METRICS_HPP_
#define FACTDA_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "factda/types.hpp"

namespace factda {

/// Unweighted mean of per-class F1 over the classes of `label_set` that
/// occur in `gold` or `predictions`. A class with gold instances but no
/// correct predictions scores 0.
double macro_f1(std::span<const VeracityLabel> predictions, std::span<const VeracityLabel> gold,
                const LabelSet& label_set);

struct RankingJudgment {
  std::string claim_id;
  std::vector<std::string> relevant;
  std::vector<std::string> ranking;
};

/// Binary-gain NDCG with log2 discounts. Throws EstimationError when the
/// relevant set is empty.
double ndcg_at_k(const RankingJudgment& judgment, std::size_t k = 10);

/// Mean NDCG over judgments with a non-empty relevant set; the number of
/// skipped judgments is written to `skipped` when non-null.
double mean_ndcg(std::span<const RankingJudgment> judgments, std::size_t k = 10,
                 std::size_t* skipped = nullptr);

struct ADistance {
  double error = 0.0;     // held-out error of the domain probe
  double estimate = 0.0;  // clamp(2 (1 - 2 error), 0, 2)
};

struct ProbeOptions {
  int epochs = 200;
  double learning_rate = 0.1;
  double l2 = 1e-4;
};

/// Trains a logistic domain probe on half of each sample set (chosen with
/// `seed`) and measures its error on the other half.
ADistance a_distance(const Eigen::Ref<const Matrix>& source, const Eigen::Ref<const Matrix>& target,
                     std::uint64_t seed, const ProbeOptions& options = {});

/// Mean error and mean estimate over one probe per seed.
ADistance a_distance(const Eigen::Ref<const Matrix>& source, const Eigen::Ref<const Matrix>& target,
                     std::span<const std::uint64_t> seeds, const ProbeOptions& options = {});

}  // namespace factda

#endif  // FACTDA_METRICS_HPP_
