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

#include "factda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "factda/error.hpp"

namespace factda {

double macro_f1(std::span<const VeracityLabel> predictions, std::span<const VeracityLabel> gold,
                const LabelSet& label_set) {
  if (predictions.size() != gold.size()) throw ArgumentError("macro_f1: prediction and gold lengths differ");
  if (gold.empty()) throw ArgumentError("macro_f1: empty input");
  const std::size_t c = kAllLabels.size();
  std::vector<std::size_t> tp(c, 0), fp(c, 0), fn(c, 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!label_set.contains(gold[i]) || !label_set.contains(predictions[i])) {
      throw ArgumentError("macro_f1: label outside the label set");
    }
    const std::size_t g = static_cast<std::size_t>(class_index(gold[i]));
    const std::size_t p = static_cast<std::size_t>(class_index(predictions[i]));
    if (g == p) {
      ++tp[g];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t k = 0; k < c; ++k) {
    if (tp[k] + fp[k] + fn[k] == 0) continue;
    total += 2.0 * double(tp[k]) / double(2 * tp[k] + fp[k] + fn[k]);
    ++counted;
  }
  return total / double(counted);
}

double ndcg_at_k(const RankingJudgment& judgment, std::size_t k) {
  if (k == 0) throw ArgumentError("ndcg_at_k: k must be at least 1");
  if (judgment.relevant.empty()) throw EstimationError("claim '" + judgment.claim_id + "' has no relevant documents");
  const std::set<std::string> relevant(judgment.relevant.begin(), judgment.relevant.end());
  double dcg = 0.0;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < std::min(k, judgment.ranking.size()); ++r) {
    const auto& id = judgment.ranking[r];
    if (relevant.contains(id) && seen.insert(id).second) dcg += 1.0 / std::log2(double(r) + 2.0);
  }
  double ideal = 0.0;
  for (std::size_t r = 0; r < std::min(k, relevant.size()); ++r) ideal += 1.0 / std::log2(double(r) + 2.0);
  return dcg / ideal;
}

double mean_ndcg(std::span<const RankingJudgment> judgments, std::size_t k, std::size_t* skipped) {
  double total = 0.0;
  std::size_t used = 0;
  std::size_t missing = 0;
  for (const auto& j : judgments) {
    if (j.relevant.empty()) {
      ++missing;
      continue;
    }
    total += ndcg_at_k(j, k);
    ++used;
  }
  if (skipped != nullptr) *skipped = missing;
  if (used == 0) throw EstimationError("no judgments with relevant documents");
  return total / double(used);
}

namespace {

// First half of a seeded permutation of [0, n) is the training part.
std::pair<std::vector<Index>, std::vector<Index>> halves(Index n, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto cut = order.begin() + static_cast<std::ptrdiff_t>(n / 2);
  return {{order.begin(), cut}, {cut, order.end()}};
}

Matrix gather_rows(const Eigen::Ref<const Matrix>& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace

ADistance a_distance(const Eigen::Ref<const Matrix>& source, const Eigen::Ref<const Matrix>& target,
                     std::uint64_t seed, const ProbeOptions& options) {
  if (source.rows() < 2 || target.rows() < 2) {
    throw EstimationError("a_distance needs at least 2 samples per domain");
  }
  if (source.cols() != target.cols()) throw EstimationError("a_distance: sample widths differ");
  const auto [s_train, s_test] = halves(source.rows(), seed);
  const auto [t_train, t_test] = halves(target.rows(), seed);

  Matrix x(static_cast<Index>(s_train.size() + t_train.size()), source.cols());
  x << gather_rows(source, s_train), gather_rows(target, t_train);
  Vector y(x.rows());
  y.head(static_cast<Index>(s_train.size())).setOnes();
  y.tail(static_cast<Index>(t_train.size())).setZero();

  const Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::RowVectorXd scale = ((x.rowwise() - mean).array().square().colwise().mean()).sqrt();
  scale = scale.unaryExpr([](double s) { return s > 1e-12 ? s : 1.0; });
  auto standardize = [&](const Matrix& m) -> Matrix {
    return ((m.rowwise() - mean).array().rowwise() / scale.array()).matrix();
  };
  const Matrix xs = standardize(x);

  // Balanced full-batch gradient descent on the logistic loss.
  Vector w = Vector::Zero(x.cols());
  double b = 0.0;
  Vector sample_weight(x.rows());
  sample_weight.head(static_cast<Index>(s_train.size())).setConstant(0.5 / double(s_train.size()));
  sample_weight.tail(static_cast<Index>(t_train.size())).setConstant(0.5 / double(t_train.size()));
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const Vector z = (xs * w).array() + b;
    const Vector p = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    const Vector r = (p - y).cwiseProduct(sample_weight);
    w -= options.learning_rate * (xs.transpose() * r + options.l2 * w);
    b -= options.learning_rate * r.sum();
  }

  auto errors = [&](const Matrix& m, bool is_source) {
    const Vector z = (standardize(m) * w).array() + b;
    std::size_t wrong = 0;
    for (Index i = 0; i < z.size(); ++i) {
      if ((z(i) > 0.0) != is_source) ++wrong;
    }
    return double(wrong) / double(z.size());
  };
  // Balanced error so that unequal sample counts do not bias the estimate.
  const double error = 0.5 * (errors(gather_rows(source, s_test), true) + errors(gather_rows(target, t_test), false));
  return {error, std::clamp(2.0 * (1.0 - 2.0 * error), 0.0, 2.0)};
}

ADistance a_distance(const Eigen::Ref<const Matrix>& source, const Eigen::Ref<const Matrix>& target,
                     std::span<const std::uint64_t> seeds, const ProbeOptions& options) {
  if (seeds.empty()) throw ArgumentError("a_distance needs at least one seed");
  ADistance mean;
  for (auto seed : seeds) {
    const ADistance one = a_distance(source, target, seed, options);
    mean.error += one.error / double(seeds.size());
    mean.estimate += one.estimate / double(seeds.size());
  }
  return mean;
}

}  // namespace factda
