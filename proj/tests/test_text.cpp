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

#include "factda/random.hpp"
#include "factda/text.hpp"

using namespace factda;

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("tokenize lowercases and splits on whitespace") {
  CHECK(tokenize("  The Cat\tSAT\n") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(tokenize("").empty());
}

TEST_CASE("truncate drops padding before capping") {
  const auto t = truncate_tokens({"a", "[pad]", "b", "c"}, 2);
  CHECK(t == std::vector<std::string>{"a", "b"});
}

TEST_CASE("join_segments caps each side separately") {
  CHECK(join_segments("a b c", 2, "x y z", 1) == "a b [sep] x");
}

TEST_CASE("derive_seed separates tags and bases") {
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
}

TEST_CASE("cyclic sampler visits every index once per cycle") {
  CyclicSampler s(5, 9);
  auto first = s.next(5);
  std::sort(first.begin(), first.end());
  CHECK(first == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(s.next(12).size() == 12);
  CyclicSampler empty(0, 1);
  CHECK(empty.next(3).empty());
}
