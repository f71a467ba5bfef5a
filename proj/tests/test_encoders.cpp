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

#include <random>

#include <doctest.h>

#include "factda/encoders.hpp"
#include "factda/error.hpp"
#include "factda/losses.hpp"
#include "test_support.hpp"

using namespace factda;

namespace {

DeskEncoderOptions small_options(Index norm = 0) {
  DeskEncoderOptions o;
  o.buckets = 64;
  o.embed_dim = 6;
  o.hidden_dim = 5;
  o.output_dim = 4;
  o.max_seq_len = 8;
  o.output_norm = norm;
  return o;
}

}  // namespace

TEST_CASE("desk encoder basics") {
  const DeskEncoder enc(small_options(), 7);
  SUBCASE("deterministic and finite") {
    const Vector a = enc.encode("the cat sat");
    CHECK(a.size() == 4);
    CHECK(a.allFinite());
    CHECK(enc.encode("the cat sat") == a);
    CHECK(DeskEncoder(small_options(), 7).encode("the cat sat") == a);
  }
  SUBCASE("bag of words within one segment") {
    CHECK(enc.encode("cat the sat") == enc.encode("the cat sat"));
  }
  SUBCASE("segments hash separately") {
    CHECK(enc.featurize("a [sep] b") != enc.featurize("b [sep] a"));
  }
  SUBCASE("truncation and empty text") {
    CHECK(enc.featurize("a b c d e f g h i j k").size() == 8);
    CHECK(enc.encode("").allFinite());
  }
  SUBCASE("clone copies parameters") {
    const auto copy = enc.clone();
    CHECK(copy->parameters() == enc.parameters());
    CHECK(copy->hyperparams() == enc.hyperparams());
  }
  SUBCASE("invalid options") {
    DeskEncoderOptions o = small_options();
    o.buckets = 0;
    CHECK_THROWS_AS(DeskEncoder(o, 1), ConfigError);
    o = small_options(-1);
    CHECK_THROWS_AS(DeskEncoder(o, 1), ConfigError);
  }
}

TEST_CASE("output normalization fixes the vector norm") {
  const DeskEncoder enc(small_options(3), 9);
  for (const char* text : {"alpha beta", "gamma", "delta epsilon zeta"}) {
    CHECK(enc.encode(text).norm() == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("desk encoder gradients match finite differences") {
  for (Index norm : {Index(0), Index(2)}) {
    CAPTURE(norm);
    DeskEncoder enc(small_options(norm), 11);
    const std::vector<std::string> texts = {"a b c", "b d", "e [sep] a f"};
    std::vector<Features> feats;
    for (const auto& t : texts) feats.push_back(enc.featurize(t));
    std::mt19937_64 rng(2);
    const Matrix probe = testing::random_matrix(3, 4, rng);
    auto loss = [&] { return (enc.forward(feats, nullptr).array() * probe.array()).sum(); };
    EncoderTrace trace;
    enc.forward(feats, &trace);
    Vector grad = Vector::Zero(enc.parameters().size());
    enc.backward(trace, probe, grad);
    const auto result = testing::check_gradient(loss, enc.parameters(), grad, 200, 5);
    CHECK(result.pass_rate() >= 0.99);
  }
}

TEST_CASE("classifier head") {
  ClassifierHead head(4, 3, 5);
  std::mt19937_64 rng(1);
  const Matrix x = testing::random_matrix(5, 4, rng);
  const Matrix p = head.predict(x);
  for (Index i = 0; i < p.rows(); ++i) CHECK(p.row(i).sum() == doctest::Approx(1.0));

  const std::vector<int> labels = {0, 1, 2, 1, 0};
  auto loss = [&] { return cross_entropy(head.predict(x), labels); };
  Vector grad = Vector::Zero(head.parameters().size());
  head.backward(x, cross_entropy_grad_logits(head.predict(x), labels), grad);
  CHECK(testing::check_gradient(loss, head.parameters(), grad, 15, 3).pass_rate() == 1.0);
}

TEST_CASE("softmax is stable for large logits") {
  Matrix z(1, 3);
  z << 1000.0, 1000.0, -1000.0;
  const Matrix p = softmax_rows(z);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(0, 2) == 0.0);
}

TEST_CASE("discriminator") {
  Discriminator g(4, 6, 3);
  std::mt19937_64 rng(8);
  const Matrix xs = testing::random_matrix(5, 4, rng);
  const Matrix xt = testing::random_matrix(6, 4, rng);
  const Vector p = g.predict(xs);
  CHECK((p.array() > 0.0).all());
  CHECK((p.array() < 1.0).all());

  auto loss = [&] { return discriminator_loss(g.predict(xs), g.predict(xt)); };
  const auto ps = g.forward(xs);
  const auto pt = g.forward(xt);
  const auto [ds, dt] = discriminator_loss_grad(ps.prob, pt.prob);
  Vector grad = Vector::Zero(g.parameters().size());
  g.backward(xs, ps, ds, &grad);
  g.backward(xt, pt, dt, &grad);
  CHECK(testing::check_gradient(loss, g.parameters(), grad, 30, 4).pass_rate() == 1.0);

  SUBCASE("a small descent step does not increase the loss") {
    const double before = loss();
    g.parameters() -= 1e-4 * grad;
    CHECK(loss() <= before);
  }
  SUBCASE("accuracy on separable inputs") {
    CHECK(discriminator_accuracy(g, xs, xt) >= 0.0);
    CHECK(discriminator_accuracy(g, xs, xt) <= 1.0);
  }
}
