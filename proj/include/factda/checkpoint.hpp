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

// Versioned little-endian binary blobs for model parameters and indexes,
// plus SHA-256 content hashing used by run manifests.

#ifndef FACTDA_CHECKPOINT_HPP_
#define FACTDA_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "factda/encoders.hpp"
#include "factda/types.hpp"

namespace factda {

inline constexpr std::uint32_t kCheckpointFormatVersion = 1;

struct NamedTensor {
  std::string name;
  Matrix values;
};

struct Checkpoint {
  std::uint32_t format_version = kCheckpointFormatVersion;
  std::string kind;
  Hyperparams hyperparams;
  std::vector<NamedTensor> tensors;

  const Matrix& tensor(std::string_view name) const;
};

std::string serialize(const Checkpoint& checkpoint);
Checkpoint deserialize_checkpoint(std::string_view bytes);

void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

Checkpoint to_checkpoint(const TextEncoder& encoder);
std::unique_ptr<TextEncoder> encoder_from_checkpoint(const Checkpoint& checkpoint);
/// Hash of the encoder's serialized checkpoint; equal iff bit-identical.
std::string parameter_hash(const TextEncoder& encoder);

Checkpoint to_checkpoint(const ClassifierHead& head);
ClassifierHead head_from_checkpoint(const Checkpoint& checkpoint);

Checkpoint to_checkpoint(const Discriminator& g);
Discriminator discriminator_from_checkpoint(const Checkpoint& checkpoint);

// Low-level stream helpers shared by other binary formats.
namespace binio {
void put_u32(std::string& out, std::uint32_t v);
void put_u64(std::string& out, std::uint64_t v);
void put_i64(std::string& out, std::int64_t v);
void put_f64(std::string& out, double v);
void put_str(std::string& out, std::string_view s);

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64();
  double f64();
  std::string str();
  void expect_magic(std::string_view magic);
  bool at_end() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::string_view bytes_;
  std::size_t pos_ = 0;
};
}  // namespace binio

}  // namespace factda

#endif  // FACTDA_CHECKPOINT_HPP_
