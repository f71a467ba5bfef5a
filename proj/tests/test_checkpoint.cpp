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

#include <doctest.h>

#include "factda/checkpoint.hpp"
#include "factda/error.hpp"
#include "test_support.hpp"

using namespace factda;

TEST_CASE("sha256 reference values") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("encoder checkpoints round-trip bit-exactly") {
  DeskEncoderOptions o;
  o.buckets = 32;
  o.embed_dim = 4;
  o.hidden_dim = 3;
  o.output_dim = 2;
  o.output_norm = 5;
  const DeskEncoder enc(o, 4);
  const std::string bytes = serialize(to_checkpoint(enc));
  const auto back = encoder_from_checkpoint(deserialize_checkpoint(bytes));
  CHECK(back->parameters() == enc.parameters());
  CHECK(back->hyperparams() == enc.hyperparams());
  CHECK(serialize(to_checkpoint(*back)) == bytes);
  CHECK(parameter_hash(*back) == parameter_hash(enc));

  SUBCASE("files round-trip") {
    testing::TempDir dir("ckpt");
    save_checkpoint(to_checkpoint(enc), dir.path() / "e.ckpt");
    CHECK(serialize(load_checkpoint(dir.path() / "e.ckpt")) == bytes);
  }
  SUBCASE("corruption is detected") {
    CHECK_THROWS_AS(deserialize_checkpoint(bytes.substr(0, bytes.size() - 3)), CheckpointError);
    CHECK_THROWS_AS(deserialize_checkpoint(bytes + "x"), CheckpointError);
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(deserialize_checkpoint(bad), CheckpointError);
  }
  SUBCASE("a missing tensor is reported") {
    CHECK_THROWS_AS(to_checkpoint(enc).tensor("nope"), CheckpointError);
  }
}

TEST_CASE("head and discriminator checkpoints round-trip") {
  const ClassifierHead head(6, 3, 2);
  const ClassifierHead h2 = head_from_checkpoint(deserialize_checkpoint(serialize(to_checkpoint(head))));
  CHECK(h2.parameters() == head.parameters());
  CHECK(h2.num_classes() == 3);
  const Discriminator g(6, 4, 1);
  const Discriminator g2 = discriminator_from_checkpoint(deserialize_checkpoint(serialize(to_checkpoint(g))));
  CHECK(g2.parameters() == g.parameters());
  CHECK_THROWS_AS(head_from_checkpoint(to_checkpoint(g)), CheckpointError);
}

TEST_CASE("oversized tensor headers are rejected without allocating") {
  std::string bytes = serialize(to_checkpoint(ClassifierHead(2, 2, 1)));
  Checkpoint huge;
  huge.kind = "x";
  huge.tensors.push_back({"t", Matrix::Zero(1, 1)});
  std::string raw = serialize(huge);
  // Overwrite the row count of the single tensor with a huge value.
  const std::size_t rows_at = raw.size() - 8 - 16;
  for (int b = 0; b < 8; ++b) raw[rows_at + b] = '\x7f';
  CHECK_THROWS_AS(deserialize_checkpoint(raw), CheckpointError);
}
