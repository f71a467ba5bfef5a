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

// Trainable text encoders, the classifier head and the domain
// discriminator. Every model keeps its parameters in one flat vector so that
// cloning, optimizer state, checkpointing and finite-difference checks all
// work on the same storage; named blocks are exposed as Eigen::Map views.

#ifndef FACTDA_ENCODERS_HPP_
#define FACTDA_ENCODERS_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "factda/types.hpp"

namespace factda {

/// Encoder-specific input ids (hash buckets for the desk encoder, vocabulary
/// ids for a subword model).
using Features = std::vector<std::int32_t>;

using Hyperparams = std::vector<std::pair<std::string, std::int64_t>>;

/// Values saved by a forward pass for the matching backward pass.
struct EncoderTrace {
  std::vector<Features> inputs;
  std::vector<Matrix> saved;
};

/// A trainable text encoder mapping a token sequence to a vector of
/// `output_dim()` reals. Implementations must be deterministic for fixed
/// parameters and provide exact gradients through `backward`.
class TextEncoder {
 public:
  virtual ~TextEncoder() = default;

  virtual std::string kind() const = 0;
  virtual Index output_dim() const = 0;
  virtual std::size_t max_seq_len() const = 0;
  virtual Hyperparams hyperparams() const = 0;

  /// Tokenizes, drops padding and truncates to `max_seq_len()`.
  virtual Features featurize(std::string_view text) const = 0;

  /// Encodes a batch; one output row per input. Fills `trace` when non-null.
  virtual Matrix forward(std::span<const Features> batch, EncoderTrace* trace) const = 0;

  /// Accumulates d(loss)/d(params) into `grad_params` given d(loss)/d(output).
  virtual void backward(const EncoderTrace& trace, const Eigen::Ref<const Matrix>& grad_output,
                        Eigen::Ref<Vector> grad_params) const = 0;

  virtual std::unique_ptr<TextEncoder> clone() const = 0;

  Vector& parameters() { return parameters_; }
  const Vector& parameters() const { return parameters_; }

  bool training() const { return training_; }
  void set_training(bool on) { training_ = on; }

  Vector encode(std::string_view text) const;
  Matrix encode_all(std::span<const std::string> texts) const;
  Matrix encode_features(std::span<const Features> batch) const { return forward(batch, nullptr); }

 protected:
  Vector parameters_;
  bool training_ = false;
};

/// Independent deep copy with equal parameter values.
std::unique_ptr<TextEncoder> clone_parameters(const TextEncoder& source);

struct DeskEncoderOptions {
  Index buckets = 2048;
  Index embed_dim = 32;
  Index hidden_dim = 64;
  Index output_dim = 16;
  std::size_t max_seq_len = 200;
  double embed_init_scale = 0.1;
  /// When positive, outputs are rescaled to this Euclidean norm.
  Index output_norm = 0;
};

/// Hashed bag-of-words encoder: lowercase whitespace tokens are hashed
/// (salted by segment index, which advances at each separator token) into
/// `buckets` embedding rows; the rows are averaged and passed through one
/// tanh hidden layer and a linear output layer, optionally followed by
/// rescaling to a fixed norm.
class DeskEncoder final : public TextEncoder {
 public:
  static constexpr std::string_view kKind = "desk-hash-mlp";

  DeskEncoder(const DeskEncoderOptions& options, std::uint64_t seed);
  /// Zero parameters; used when restoring from a checkpoint.
  explicit DeskEncoder(const DeskEncoderOptions& options);

  std::string kind() const override { return std::string(kKind); }
  Index output_dim() const override { return options_.output_dim; }
  std::size_t max_seq_len() const override { return options_.max_seq_len; }
  Hyperparams hyperparams() const override;
  const DeskEncoderOptions& options() const { return options_; }

  Features featurize(std::string_view text) const override;
  Matrix forward(std::span<const Features> batch, EncoderTrace* trace) const override;
  void backward(const EncoderTrace& trace, const Eigen::Ref<const Matrix>& grad_output,
                Eigen::Ref<Vector> grad_params) const override;
  std::unique_ptr<TextEncoder> clone() const override;

  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;
  using VectorMap = Eigen::Map<Vector>;
  using ConstVectorMap = Eigen::Map<const Vector>;

  ConstMatrixMap embeddings() const { return block(parameters_, 0, options_.buckets, options_.embed_dim); }
  ConstMatrixMap hidden_weights() const { return block(parameters_, w1_offset(), options_.hidden_dim, options_.embed_dim); }
  ConstVectorMap hidden_bias() const { return {parameters_.data() + b1_offset(), options_.hidden_dim}; }
  ConstMatrixMap output_weights() const { return block(parameters_, w2_offset(), options_.output_dim, options_.hidden_dim); }
  ConstVectorMap output_bias() const { return {parameters_.data() + b2_offset(), options_.output_dim}; }

  static Index parameter_count(const DeskEncoderOptions& o);

 private:
  static ConstMatrixMap block(const Vector& p, Index offset, Index rows, Index cols) {
    return {p.data() + offset, rows, cols};
  }
  static MatrixMap block(Vector& p, Index offset, Index rows, Index cols) {
    return {p.data() + offset, rows, cols};
  }
  Index w1_offset() const { return options_.buckets * options_.embed_dim; }
  Index b1_offset() const { return w1_offset() + options_.hidden_dim * options_.embed_dim; }
  Index w2_offset() const { return b1_offset() + options_.hidden_dim; }
  Index b2_offset() const { return w2_offset() + options_.output_dim * options_.hidden_dim; }

  DeskEncoderOptions options_;
};

DeskEncoderOptions desk_options_from(const Hyperparams& hp);

/// Linear layer followed by softmax over `num_classes` classes.
class ClassifierHead {
 public:
  ClassifierHead() = default;
  ClassifierHead(Index input_dim, int num_classes, std::uint64_t seed);

  Index input_dim() const { return input_dim_; }
  int num_classes() const { return num_classes_; }

  /// Row-wise logits.
  Matrix logits(const Eigen::Ref<const Matrix>& inputs) const;
  /// Row-wise probability distributions.
  Matrix predict(const Eigen::Ref<const Matrix>& inputs) const;
  /// Given d(loss)/d(logits), accumulates parameter gradients and returns
  /// d(loss)/d(inputs).
  Matrix backward(const Eigen::Ref<const Matrix>& inputs, const Eigen::Ref<const Matrix>& grad_logits,
                  Eigen::Ref<Vector> grad_params) const;

  Vector& parameters() { return parameters_; }
  const Vector& parameters() const { return parameters_; }

  Eigen::Map<const Matrix> weights() const { return {parameters_.data(), num_classes_, input_dim_}; }
  Eigen::Map<const Vector> bias() const {
    return {parameters_.data() + num_classes_ * input_dim_, num_classes_};
  }

 private:
  Index input_dim_ = 0;
  int num_classes_ = 0;
  Vector parameters_;
};

/// Numerically stable row-wise softmax.
Matrix softmax_rows(const Eigen::Ref<const Matrix>& logits);

/// Two-layer perceptron with a logistic output, g(v) in (0, 1).
class Discriminator {
 public:
  static constexpr double kClamp = 1e-7;

  Discriminator() = default;
  Discriminator(Index input_dim, Index hidden_dim, std::uint64_t seed);

  Index input_dim() const { return input_dim_; }
  Index hidden_dim() const { return hidden_dim_; }

  struct Pass {
    Matrix hidden;   // n x hidden
    Vector prob;     // n, unclamped
  };

  Pass forward(const Eigen::Ref<const Matrix>& inputs) const;
  Vector predict(const Eigen::Ref<const Matrix>& inputs) const { return forward(inputs).prob; }

  /// Given d(loss)/d(prob), accumulates parameter gradients (when
  /// `grad_params` is non-null) and returns d(loss)/d(inputs).
  Matrix backward(const Eigen::Ref<const Matrix>& inputs, const Pass& pass,
                  const Eigen::Ref<const Vector>& grad_prob, Vector* grad_params) const;

  Vector& parameters() { return parameters_; }
  const Vector& parameters() const { return parameters_; }

 private:
  Eigen::Map<const Matrix> w1() const { return {parameters_.data(), hidden_dim_, input_dim_}; }
  Eigen::Map<const Vector> b1() const { return {parameters_.data() + hidden_dim_ * input_dim_, hidden_dim_}; }
  Eigen::Map<const Vector> w2() const {
    return {parameters_.data() + hidden_dim_ * input_dim_ + hidden_dim_, hidden_dim_};
  }
  double b2() const { return parameters_(parameters_.size() - 1); }

  Index input_dim_ = 0;
  Index hidden_dim_ = 0;
  Vector parameters_;
};

/// Fraction of rows classified correctly with source = 1, target = 0 at a
/// 0.5 threshold.
double discriminator_accuracy(const Discriminator& g, const Eigen::Ref<const Matrix>& source,
                              const Eigen::Ref<const Matrix>& target);

}  // namespace factda

#endif  // FACTDA_ENCODERS_HPP_
