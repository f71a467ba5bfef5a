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

#include "factda/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "factda/error.hpp"

namespace factda {
namespace {

constexpr std::string_view kMagic = "FDCKPT01";

}  // namespace

namespace binio {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_i64(std::string& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
void put_str(std::string& out, std::string_view s) {
  put_u64(out, s.size());
  out.append(s);
}

void Reader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) throw CheckpointError("truncated binary blob");
}
std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
  }
  pos_ += 8;
  return v;
}
std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
  }
  pos_ += 4;
  return v;
}
std::int64_t Reader::i64() { return static_cast<std::int64_t>(u64()); }
double Reader::f64() { return std::bit_cast<double>(u64()); }
std::string Reader::str() {
  const auto n = u64();
  need(n);
  std::string s(bytes_.substr(pos_, n));
  pos_ += n;
  return s;
}
void Reader::expect_magic(std::string_view magic) {
  need(magic.size());
  if (bytes_.substr(pos_, magic.size()) != magic) throw CheckpointError("bad magic bytes");
  pos_ += magic.size();
}

}  // namespace binio

const Matrix& Checkpoint::tensor(std::string_view name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t.values;
  }
  throw CheckpointError("checkpoint has no tensor '" + std::string(name) + "'");
}

std::string serialize(const Checkpoint& ckpt) {
  std::string out(kMagic);
  binio::put_u32(out, ckpt.format_version);
  binio::put_str(out, ckpt.kind);
  binio::put_u64(out, ckpt.hyperparams.size());
  for (const auto& [k, v] : ckpt.hyperparams) {
    binio::put_str(out, k);
    binio::put_i64(out, v);
  }
  binio::put_u64(out, ckpt.tensors.size());
  for (const auto& t : ckpt.tensors) {
    binio::put_str(out, t.name);
    binio::put_u64(out, static_cast<std::uint64_t>(t.values.rows()));
    binio::put_u64(out, static_cast<std::uint64_t>(t.values.cols()));
    for (Index i = 0; i < t.values.size(); ++i) binio::put_f64(out, t.values.data()[i]);
  }
  return out;
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  binio::Reader in(bytes);
  in.expect_magic(kMagic);
  Checkpoint ckpt;
  ckpt.format_version = in.u32();
  if (ckpt.format_version != kCheckpointFormatVersion) {
    throw CheckpointError("unsupported checkpoint format version " + std::to_string(ckpt.format_version));
  }
  ckpt.kind = in.str();
  const auto n_hp = in.u64();
  for (std::uint64_t i = 0; i < n_hp; ++i) {
    auto k = in.str();
    ckpt.hyperparams.emplace_back(std::move(k), in.i64());
  }
  const auto n_t = in.u64();
  for (std::uint64_t i = 0; i < n_t; ++i) {
    NamedTensor t;
    t.name = in.str();
    const auto rows = in.u64();
    const auto cols = in.u64();
    if (cols != 0 && rows > in.remaining() / 8 / cols) throw CheckpointError("tensor '" + t.name + "' exceeds the file");
    t.values.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index j = 0; j < t.values.size(); ++j) t.values.data()[j] = in.f64();
    ckpt.tensors.push_back(std::move(t));
  }
  if (!in.at_end()) throw CheckpointError("trailing bytes after checkpoint");
  return ckpt;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("write failed for '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_file(path, serialize(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(read_file(path));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

// ---------------------------------------------------------------------------

Checkpoint to_checkpoint(const TextEncoder& encoder) {
  Checkpoint ckpt;
  ckpt.kind = encoder.kind();
  ckpt.hyperparams = encoder.hyperparams();
  const Vector& p = encoder.parameters();
  ckpt.tensors.push_back({"parameters", Eigen::Map<const Matrix>(p.data(), 1, p.size())});
  return ckpt;
}

std::unique_ptr<TextEncoder> encoder_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != DeskEncoder::kKind) {
    throw CheckpointError("unknown encoder kind '" + ckpt.kind + "'");
  }
  auto enc = std::make_unique<DeskEncoder>(desk_options_from(ckpt.hyperparams));
  const Matrix& p = ckpt.tensor("parameters");
  if (p.size() != enc->parameters().size()) throw CheckpointError("encoder parameter count mismatch");
  enc->parameters() = Eigen::Map<const Vector>(p.data(), p.size());
  return enc;
}

std::string parameter_hash(const TextEncoder& encoder) { return sha256_hex(serialize(to_checkpoint(encoder))); }

Checkpoint to_checkpoint(const ClassifierHead& head) {
  Checkpoint ckpt;
  ckpt.kind = "classifier-head";
  ckpt.hyperparams = {{"input_dim", head.input_dim()}, {"num_classes", head.num_classes()}};
  ckpt.tensors.push_back({"weights", head.weights()});
  ckpt.tensors.push_back({"bias", head.bias().transpose()});
  return ckpt;
}

ClassifierHead head_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "classifier-head") throw CheckpointError("not a classifier-head checkpoint");
  Index input_dim = 0;
  int classes = 0;
  for (const auto& [k, v] : ckpt.hyperparams) {
    if (k == "input_dim") input_dim = v;
    if (k == "num_classes") classes = static_cast<int>(v);
  }
  ClassifierHead head(input_dim, classes, 0);
  const Matrix& w = ckpt.tensor("weights");
  const Matrix& b = ckpt.tensor("bias");
  if (w.rows() != classes || w.cols() != input_dim || b.size() != classes) {
    throw CheckpointError("classifier-head tensor shape mismatch");
  }
  head.parameters().head(w.size()) = Eigen::Map<const Vector>(w.data(), w.size());
  head.parameters().tail(classes) = Eigen::Map<const Vector>(b.data(), classes);
  return head;
}

Checkpoint to_checkpoint(const Discriminator& g) {
  Checkpoint ckpt;
  ckpt.kind = "discriminator-mlp";
  ckpt.hyperparams = {{"input_dim", g.input_dim()}, {"hidden_dim", g.hidden_dim()}};
  const Vector& p = g.parameters();
  ckpt.tensors.push_back({"parameters", Eigen::Map<const Matrix>(p.data(), 1, p.size())});
  return ckpt;
}

Discriminator discriminator_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "discriminator-mlp") throw CheckpointError("not a discriminator checkpoint");
  Index input_dim = 0;
  Index hidden = 0;
  for (const auto& [k, v] : ckpt.hyperparams) {
    if (k == "input_dim") input_dim = v;
    if (k == "hidden_dim") hidden = v;
  }
  Discriminator g(input_dim, hidden, 0);
  const Matrix& p = ckpt.tensor("parameters");
  if (p.size() != g.parameters().size()) throw CheckpointError("discriminator parameter count mismatch");
  g.parameters() = Eigen::Map<const Vector>(p.data(), p.size());
  return g;
}

}  // namespace factda
