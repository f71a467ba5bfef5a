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

// Loss kernels over dense Eigen expressions. Each loss comes with a
// `*_grad` companion returning the gradient with respect to its direct
// inputs; callers chain those into model backward passes.

#ifndef FACTDA_LOSSES_HPP_
#define FACTDA_LOSSES_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "factda/error.hpp"

namespace factda {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& values) {
  using std::exp;
  using std::log;
  const auto m = values.maxCoeff();
  return m + log((values.derived().array() - m).exp().sum());
}

// ---------------------------------------------------------------------------
// Contrastive negative log-likelihood.
//
// Row i of `scores` holds the similarities of claim i to its candidate
// documents; `positive[i]` is the column of its relevant document. Returns
// the sum over rows of -log softmax(scores_i)[positive_i].

template <typename Derived>
typename Derived::Scalar contrastive_loss(const Eigen::MatrixBase<Derived>& scores,
                                          std::span<const Eigen::Index> positive) {
  using Scalar = typename Derived::Scalar;
  Scalar total(0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    total += log_sum_exp(scores.row(i)) - scores(i, positive[static_cast<std::size_t>(i)]);
  }
  return total;
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> contrastive_loss_grad(
    const Eigen::MatrixBase<Derived>& scores, std::span<const Eigen::Index> positive) {
  using Scalar = typename Derived::Scalar;
  DenseMatrix<Scalar> grad(scores.rows(), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const Scalar lse = log_sum_exp(scores.row(i));
    grad.row(i) = (scores.row(i).array() - lse).exp().matrix();
    grad(i, positive[static_cast<std::size_t>(i)]) -= Scalar(1);
  }
  return grad;
}

/// In-batch form: row i's positive is column i.
template <typename Derived>
typename Derived::Scalar in_batch_contrastive_loss(const Eigen::MatrixBase<Derived>& scores) {
  using Scalar = typename Derived::Scalar;
  Scalar total(0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) total += log_sum_exp(scores.row(i)) - scores(i, i);
  return total;
}

// ---------------------------------------------------------------------------
// Adversarial objectives over discriminator outputs g(v) in (0, 1).
// Outputs are clamped to [kProbClamp, 1 - kProbClamp] before the log; the
// clamp has zero derivative outside that range.

inline constexpr double kProbClamp = 1e-7;

template <typename Scalar>
Scalar clamp_prob(Scalar p) {
  return std::clamp(p, Scalar(kProbClamp), Scalar(1.0 - kProbClamp));
}

template <typename Scalar>
Scalar clamp_prob_derivative(Scalar p) {
  return (p < Scalar(kProbClamp) || p > Scalar(1.0 - kProbClamp)) ? Scalar(0) : Scalar(1);
}

/// -mean log g(source) - mean log(1 - g(target)).
template <typename DerivedS, typename DerivedT>
typename DerivedS::Scalar discriminator_loss(const Eigen::MatrixBase<DerivedS>& g_source,
                                             const Eigen::MatrixBase<DerivedT>& g_target) {
  using Scalar = typename DerivedS::Scalar;
  using std::log;
  if (g_source.size() == 0 || g_target.size() == 0) {
    throw DegenerateBatchError("discriminator loss needs non-empty source and target batches");
  }
  Scalar s(0);
  for (Eigen::Index i = 0; i < g_source.size(); ++i) s += log(clamp_prob(g_source(i)));
  Scalar t(0);
  for (Eigen::Index i = 0; i < g_target.size(); ++i) t += log(Scalar(1) - clamp_prob(g_target(i)));
  return -s / Scalar(g_source.size()) - t / Scalar(g_target.size());
}

/// Gradients of discriminator_loss with respect to g(source) and g(target).
template <typename DerivedS, typename DerivedT>
std::pair<DenseVector<typename DerivedS::Scalar>, DenseVector<typename DerivedS::Scalar>>
discriminator_loss_grad(const Eigen::MatrixBase<DerivedS>& g_source,
                        const Eigen::MatrixBase<DerivedT>& g_target) {
  using Scalar = typename DerivedS::Scalar;
  const Scalar ns = Scalar(g_source.size());
  const Scalar nt = Scalar(g_target.size());
  DenseVector<Scalar> ds(g_source.size());
  DenseVector<Scalar> dt(g_target.size());
  for (Eigen::Index i = 0; i < g_source.size(); ++i) {
    ds(i) = -clamp_prob_derivative(g_source(i)) / (clamp_prob(g_source(i)) * ns);
  }
  for (Eigen::Index i = 0; i < g_target.size(); ++i) {
    dt(i) = clamp_prob_derivative(g_target(i)) / ((Scalar(1) - clamp_prob(g_target(i))) * nt);
  }
  return {ds, dt};
}

/// Sign convention of the target-encoder objective.
enum class GeneratorObjective {
  /// -mean log g(target): push target vectors toward the "source" side.
  kFoolDiscriminator,
  /// +mean log g(target), minimized as written in the original formulation.
  kLiteral,
};

template <typename Derived>
typename Derived::Scalar generator_loss(const Eigen::MatrixBase<Derived>& g_target,
                                        GeneratorObjective objective = GeneratorObjective::kFoolDiscriminator) {
  using Scalar = typename Derived::Scalar;
  using std::log;
  if (g_target.size() == 0) throw DegenerateBatchError("generator loss needs a non-empty batch");
  Scalar t(0);
  for (Eigen::Index i = 0; i < g_target.size(); ++i) t += log(clamp_prob(g_target(i)));
  t /= Scalar(g_target.size());
  return objective == GeneratorObjective::kFoolDiscriminator ? -t : t;
}

template <typename Derived>
DenseVector<typename Derived::Scalar> generator_loss_grad(
    const Eigen::MatrixBase<Derived>& g_target,
    GeneratorObjective objective = GeneratorObjective::kFoolDiscriminator) {
  using Scalar = typename Derived::Scalar;
  const Scalar sign = objective == GeneratorObjective::kFoolDiscriminator ? Scalar(-1) : Scalar(1);
  const Scalar n = Scalar(g_target.size());
  DenseVector<Scalar> grad(g_target.size());
  for (Eigen::Index i = 0; i < g_target.size(); ++i) {
    grad(i) = sign * clamp_prob_derivative(g_target(i)) / (clamp_prob(g_target(i)) * n);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Correlation alignment.

/// Mean-centered sample covariance (normalized by n - 1) of the rows of x.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> sample_covariance(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() < 2) throw DegenerateBatchError("covariance needs at least 2 rows");
  const DenseMatrix<Scalar> centered = x.rowwise() - x.colwise().mean();
  return (centered.transpose() * centered) / Scalar(x.rows() - 1);
}

/// ||cov(xs) - cov(xt)||_F^2 / (4 d^2).
template <typename DerivedS, typename DerivedT>
typename DerivedS::Scalar coral_distance(const Eigen::MatrixBase<DerivedS>& xs,
                                         const Eigen::MatrixBase<DerivedT>& xt) {
  using Scalar = typename DerivedS::Scalar;
  if (xs.cols() != xt.cols()) throw DegenerateBatchError("coral: column counts differ");
  if (xs.rows() < 2 || xt.rows() < 2) throw DegenerateBatchError("coral: each batch needs at least 2 rows");
  const Scalar d = Scalar(xs.cols());
  return (sample_covariance(xs) - sample_covariance(xt)).squaredNorm() / (Scalar(4) * d * d);
}

/// Gradients of coral_distance with respect to xs and xt.
template <typename DerivedS, typename DerivedT>
std::pair<DenseMatrix<typename DerivedS::Scalar>, DenseMatrix<typename DerivedS::Scalar>>
coral_distance_grad(const Eigen::MatrixBase<DerivedS>& xs, const Eigen::MatrixBase<DerivedT>& xt) {
  using Scalar = typename DerivedS::Scalar;
  if (xs.cols() != xt.cols()) throw DegenerateBatchError("coral: column counts differ");
  if (xs.rows() < 2 || xt.rows() < 2) throw DegenerateBatchError("coral: each batch needs at least 2 rows");
  const Scalar d = Scalar(xs.cols());
  const DenseMatrix<Scalar> cs = xs.rowwise() - xs.colwise().mean();
  const DenseMatrix<Scalar> ct = xt.rowwise() - xt.colwise().mean();
  const DenseMatrix<Scalar> diff =
      (cs.transpose() * cs) / Scalar(xs.rows() - 1) - (ct.transpose() * ct) / Scalar(xt.rows() - 1);
  // Centered columns sum to zero, so the centering Jacobian drops out.
  DenseMatrix<Scalar> gs = (cs * diff) / (Scalar(xs.rows() - 1) * d * d);
  DenseMatrix<Scalar> gt = -(ct * diff) / (Scalar(xt.rows() - 1) * d * d);
  return {std::move(gs), std::move(gt)};
}

// ---------------------------------------------------------------------------
// Cross-entropy over class distributions.

/// Mean of -log probs(i, labels[i]).
template <typename Derived>
typename Derived::Scalar cross_entropy(const Eigen::MatrixBase<Derived>& probs,
                                       std::span<const int> labels) {
  using Scalar = typename Derived::Scalar;
  using std::log;
  if (probs.rows() == 0) throw DegenerateBatchError("cross entropy needs a non-empty batch");
  Scalar total(0);
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    total -= log(std::max(probs(i, labels[static_cast<std::size_t>(i)]), Scalar(1e-300)));
  }
  return total / Scalar(probs.rows());
}

/// Gradient of the mean cross-entropy with respect to the logits that
/// produced `probs` through a softmax.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> cross_entropy_grad_logits(const Eigen::MatrixBase<Derived>& probs,
                                                                std::span<const int> labels) {
  using Scalar = typename Derived::Scalar;
  DenseMatrix<Scalar> grad = probs;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) grad(i, labels[static_cast<std::size_t>(i)]) -= Scalar(1);
  return grad / Scalar(probs.rows());
}

}  // namespace factda

#endif  // FACTDA_LOSSES_HPP_
