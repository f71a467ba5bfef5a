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

#include "factda/encoders.hpp"

#include <cmath>
#include <random>

#include "factda/error.hpp"
#include "factda/text.hpp"

namespace factda {
namespace {

void fill_normal(Eigen::Ref<Vector> out, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Index i = 0; i < out.size(); ++i) out(i) = dist(rng);
}

std::int64_t lookup(const Hyperparams& hp, std::string_view key) {
  for (const auto& [k, v] : hp) {
    if (k == key) return v;
  }
  throw CheckpointError("missing hyperparameter '" + std::string(key) + "'");
}

}  // namespace

Vector TextEncoder::encode(std::string_view text) const {
  const Features f = featurize(text);
  return forward(std::span<const Features>(&f, 1), nullptr).row(0).transpose();
}

Matrix TextEncoder::encode_all(std::span<const std::string> texts) const {
  std::vector<Features> batch;
  batch.reserve(texts.size());
  for (const auto& t : texts) batch.push_back(featurize(t));
  return forward(batch, nullptr);
}

std::unique_ptr<TextEncoder> clone_parameters(const TextEncoder& source) { return source.clone(); }

// ---------------------------------------------------------------------------
// DeskEncoder

Index DeskEncoder::parameter_count(const DeskEncoderOptions& o) {
  return o.buckets * o.embed_dim + o.hidden_dim * o.embed_dim + o.hidden_dim +
         o.output_dim * o.hidden_dim + o.output_dim;
}

DeskEncoder::DeskEncoder(const DeskEncoderOptions& options) : options_(options) {
  if (options.buckets < 1 || options.embed_dim < 1 || options.hidden_dim < 1 ||
      options.output_dim < 1 || options.max_seq_len < 1 || options.output_norm < 0) {
    throw ConfigError("desk encoder dimensions must be positive");
  }
  parameters_ = Vector::Zero(parameter_count(options));
}

DeskEncoder::DeskEncoder(const DeskEncoderOptions& options, std::uint64_t seed)
    : DeskEncoder(options) {
  std::mt19937_64 rng(seed);
  const Index e = options.embed_dim;
  const Index h = options.hidden_dim;
  fill_normal(parameters_.segment(0, w1_offset()), options.embed_init_scale, rng);
  fill_normal(parameters_.segment(w1_offset(), h * e), 1.0 / std::sqrt(double(e)), rng);
  fill_normal(parameters_.segment(w2_offset(), options.output_dim * h),
              1.0 / std::sqrt(double(h)), rng);
}

Hyperparams DeskEncoder::hyperparams() const {
  return {{"buckets", options_.buckets},
          {"embed_dim", options_.embed_dim},
          {"hidden_dim", options_.hidden_dim},
          {"output_dim", options_.output_dim},
          {"max_seq_len", static_cast<std::int64_t>(options_.max_seq_len)},
          {"output_norm", options_.output_norm}};
}

DeskEncoderOptions desk_options_from(const Hyperparams& hp) {
  DeskEncoderOptions o;
  o.buckets = lookup(hp, "buckets");
  o.embed_dim = lookup(hp, "embed_dim");
  o.hidden_dim = lookup(hp, "hidden_dim");
  o.output_dim = lookup(hp, "output_dim");
  o.max_seq_len = static_cast<std::size_t>(lookup(hp, "max_seq_len"));
  o.output_norm = lookup(hp, "output_norm");
  return o;
}

Features DeskEncoder::featurize(std::string_view text) const {
  const auto tokens = truncate_tokens(tokenize(text), options_.max_seq_len);
  Features out;
  out.reserve(tokens.size());
  int segment = 0;
  std::uint64_t salt = fnv1a64("segment:0");
  for (const auto& tok : tokens) {
    if (tok == kSepToken) {
      ++segment;
      salt = fnv1a64("segment:" + std::to_string(segment));
      continue;
    }
    out.push_back(static_cast<std::int32_t>(fnv1a64(tok, salt) %
                                            static_cast<std::uint64_t>(options_.buckets)));
  }
  return out;
}

Matrix DeskEncoder::forward(std::span<const Features> batch, EncoderTrace* trace) const {
  const Index n = static_cast<Index>(batch.size());
  const auto table = embeddings();
  Matrix pooled = Matrix::Zero(n, options_.embed_dim);
  for (Index i = 0; i < n; ++i) {
    const auto& f = batch[static_cast<std::size_t>(i)];
    if (f.empty()) continue;
    for (auto b : f) pooled.row(i) += table.row(b);
    pooled.row(i) /= static_cast<double>(f.size());
  }
  Matrix hidden = (pooled * hidden_weights().transpose()).rowwise() + hidden_bias().transpose();
  hidden = hidden.array().tanh().matrix();
  Matrix out = (hidden * output_weights().transpose()).rowwise() + output_bias().transpose();
  Matrix raw;
  if (options_.output_norm > 0) {
    raw = out;
    for (Index i = 0; i < n; ++i) out.row(i) *= double(options_.output_norm) / std::max(out.row(i).norm(), 1e-12);
  }
  if (trace != nullptr) {
    trace->inputs.assign(batch.begin(), batch.end());
    trace->saved = {std::move(pooled), std::move(hidden), std::move(raw)};
  }
  return out;
}

void DeskEncoder::backward(const EncoderTrace& trace, const Eigen::Ref<const Matrix>& grad_output,
                           Eigen::Ref<Vector> grad_params) const {
  const Matrix& pooled = trace.saved.at(0);
  const Matrix& hidden = trace.saved.at(1);
  const Index e = options_.embed_dim;
  const Index h = options_.hidden_dim;
  const Index d = options_.output_dim;
  double* g = grad_params.data();

  Matrix grad_raw = grad_output;
  if (options_.output_norm > 0) {
    const Matrix& raw = trace.saved.at(2);
    for (Index i = 0; i < raw.rows(); ++i) {
      const double r = std::max(raw.row(i).norm(), 1e-12);
      const auto u = raw.row(i) / r;
      grad_raw.row(i) = double(options_.output_norm) / r * (grad_output.row(i) - u.dot(grad_output.row(i)) * u);
    }
  }

  MatrixMap(g + w2_offset(), d, h).noalias() += grad_raw.transpose() * hidden;
  VectorMap(g + b2_offset(), d) += grad_raw.colwise().sum().transpose();

  Matrix grad_pre = (grad_raw * output_weights()).cwiseProduct(
      (1.0 - hidden.array().square()).matrix());
  MatrixMap(g + w1_offset(), h, e).noalias() += grad_pre.transpose() * pooled;
  VectorMap(g + b1_offset(), h) += grad_pre.colwise().sum().transpose();

  const Matrix grad_pooled = grad_pre * hidden_weights();
  MatrixMap table(g, options_.buckets, e);
  for (std::size_t i = 0; i < trace.inputs.size(); ++i) {
    const auto& f = trace.inputs[i];
    if (f.empty()) continue;
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto b : f) table.row(b) += scale * grad_pooled.row(static_cast<Index>(i));
  }
}

std::unique_ptr<TextEncoder> DeskEncoder::clone() const { return std::make_unique<DeskEncoder>(*this); }

// ---------------------------------------------------------------------------
// ClassifierHead

ClassifierHead::ClassifierHead(Index input_dim, int num_classes, std::uint64_t seed)
    : input_dim_(input_dim), num_classes_(num_classes) {
  if (input_dim < 1) throw ConfigError("classifier input_dim must be positive");
  if (num_classes != 2 && num_classes != 3) throw ConfigError("classifier needs 2 or 3 classes");
  parameters_ = Vector::Zero(num_classes * input_dim + num_classes);
  std::mt19937_64 rng(seed);
  fill_normal(parameters_.head(num_classes * input_dim), 1.0 / std::sqrt(double(input_dim)), rng);
}

Matrix softmax_rows(const Eigen::Ref<const Matrix>& logits) {
  Matrix out = logits.colwise() - logits.rowwise().maxCoeff();
  out = out.array().exp().matrix();
  out.array().colwise() /= out.rowwise().sum().array();
  return out;
}

Matrix ClassifierHead::logits(const Eigen::Ref<const Matrix>& inputs) const {
  return (inputs * weights().transpose()).rowwise() + bias().transpose();
}

Matrix ClassifierHead::predict(const Eigen::Ref<const Matrix>& inputs) const {
  return softmax_rows(logits(inputs));
}

Matrix ClassifierHead::backward(const Eigen::Ref<const Matrix>& inputs,
                                const Eigen::Ref<const Matrix>& grad_logits,
                                Eigen::Ref<Vector> grad_params) const {
  double* g = grad_params.data();
  Eigen::Map<Matrix>(g, num_classes_, input_dim_).noalias() += grad_logits.transpose() * inputs;
  Eigen::Map<Vector>(g + num_classes_ * input_dim_, num_classes_) +=
      grad_logits.colwise().sum().transpose();
  return grad_logits * weights();
}

// ---------------------------------------------------------------------------
// Discriminator

Discriminator::Discriminator(Index input_dim, Index hidden_dim, std::uint64_t seed)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
  if (input_dim < 1 || hidden_dim < 1) throw ConfigError("discriminator dimensions must be positive");
  parameters_ = Vector::Zero(hidden_dim * input_dim + 2 * hidden_dim + 1);
  std::mt19937_64 rng(seed);
  fill_normal(parameters_.head(hidden_dim * input_dim), 1.0 / std::sqrt(double(input_dim)), rng);
  fill_normal(parameters_.segment(hidden_dim * input_dim + hidden_dim, hidden_dim),
              1.0 / std::sqrt(double(hidden_dim)), rng);
}

Discriminator::Pass Discriminator::forward(const Eigen::Ref<const Matrix>& inputs) const {
  Pass pass;
  pass.hidden = ((inputs * w1().transpose()).rowwise() + b1().transpose()).array().tanh().matrix();
  const Vector z = (pass.hidden * w2()).array() + b2();
  pass.prob = (1.0 / (1.0 + (-z.array()).exp())).matrix();
  return pass;
}

Matrix Discriminator::backward(const Eigen::Ref<const Matrix>& inputs, const Pass& pass,
                               const Eigen::Ref<const Vector>& grad_prob,
                               Vector* grad_params) const {
  const Vector grad_z = grad_prob.cwiseProduct(pass.prob.cwiseProduct((1.0 - pass.prob.array()).matrix()));
  const Matrix grad_pre = (grad_z * w2().transpose()).cwiseProduct(
      (1.0 - pass.hidden.array().square()).matrix());
  if (grad_params != nullptr) {
    double* g = grad_params->data();
    const Index h = hidden_dim_;
    const Index d = input_dim_;
    Eigen::Map<Matrix>(g, h, d).noalias() += grad_pre.transpose() * inputs;
    Eigen::Map<Vector>(g + h * d, h) += grad_pre.colwise().sum().transpose();
    Eigen::Map<Vector>(g + h * d + h, h).noalias() += pass.hidden.transpose() * grad_z;
    (*grad_params)(grad_params->size() - 1) += grad_z.sum();
  }
  return grad_pre * w1();
}

double discriminator_accuracy(const Discriminator& g, const Eigen::Ref<const Matrix>& source,
                              const Eigen::Ref<const Matrix>& target) {
  const Index n = source.rows() + target.rows();
  if (n == 0) return 0.0;
  const Vector ps = g.predict(source);
  const Vector pt = g.predict(target);
  const Index correct = (ps.array() >= 0.5).count() + (pt.array() < 0.5).count();
  return static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace factda
