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

#include "factda/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <variant>

#include "factda/error.hpp"

namespace factda {
namespace {

using Member = std::variant<std::uint64_t AdaptationConfig::*, int AdaptationConfig::*,
                            double AdaptationConfig::*, bool AdaptationConfig::*,
                            std::string AdaptationConfig::*>;

struct Field {
  const char* key;
  Member member;
};

// clang-format off
const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      {"seed", &AdaptationConfig::seed},
      {"num_seeds", &AdaptationConfig::num_seeds},
      {"hash_buckets", &AdaptationConfig::hash_buckets},
      {"embed_dim", &AdaptationConfig::embed_dim},
      {"hidden_dim", &AdaptationConfig::hidden_dim},
      {"output_dim", &AdaptationConfig::output_dim},
      {"embed_init_scale", &AdaptationConfig::embed_init_scale},
      {"retriever_output_norm", &AdaptationConfig::retriever_output_norm},
      {"tied_encoders", &AdaptationConfig::tied_encoders},
      {"discriminator_hidden", &AdaptationConfig::discriminator_hidden},
      {"retriever_batch", &AdaptationConfig::retriever_batch},
      {"reader_batch", &AdaptationConfig::reader_batch},
      {"claim_max_len", &AdaptationConfig::claim_max_len},
      {"doc_max_len", &AdaptationConfig::doc_max_len},
      {"lambda1", &AdaptationConfig::lambda1},
      {"lambda2", &AdaptationConfig::lambda2},
      {"top_k", &AdaptationConfig::top_k},
      {"pseudo_evidence_p", &AdaptationConfig::pseudo_evidence_p},
      {"negative_mode", &AdaptationConfig::negative_mode},
      {"sampled_negatives", &AdaptationConfig::sampled_negatives},
      {"pseudo_pretrain", &AdaptationConfig::pseudo_pretrain},
      {"pseudo_queries", &AdaptationConfig::pseudo_queries},
      {"pretrain_epochs", &AdaptationConfig::pretrain_epochs},
      {"retriever_epochs", &AdaptationConfig::retriever_epochs},
      {"reader_epochs", &AdaptationConfig::reader_epochs},
      {"adapt_steps", &AdaptationConfig::adapt_steps},
      {"adapt_warmup", &AdaptationConfig::adapt_warmup},
      {"adapt_batch", &AdaptationConfig::adapt_batch},
      {"lr_retriever", &AdaptationConfig::lr_retriever},
      {"lr_reader", &AdaptationConfig::lr_reader},
      {"lr_discriminator", &AdaptationConfig::lr_discriminator},
      {"lr_adapt", &AdaptationConfig::lr_adapt},
      {"adapt_optimizer", &AdaptationConfig::adapt_optimizer},
      {"train_fraction", &AdaptationConfig::train_fraction},
      {"evidence_per_claim", &AdaptationConfig::evidence_per_claim},
      {"no_retriever_adapt", &AdaptationConfig::no_retriever_adapt},
      {"no_doc_adapt", &AdaptationConfig::no_doc_adapt},
      {"no_reader_adapt", &AdaptationConfig::no_reader_adapt},
      {"no_reverse", &AdaptationConfig::no_reverse},
      {"no_align", &AdaptationConfig::no_align},
      {"uniform_ranking", &AdaptationConfig::uniform_ranking},
      {"literal_generator_sign", &AdaptationConfig::literal_generator_sign},
      {"dual_order_inference", &AdaptationConfig::dual_order_inference},
      {"disjoint_alignment_pool", &AdaptationConfig::disjoint_alignment_pool},
  };
  return kFields;
}
// clang-format on

const Field& find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw ConfigError("unknown config field '" + std::string(key) + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("field '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.key);
  return out;
}

NegativeMode AdaptationConfig::negatives() const {
  if (negative_mode == "in-batch") return NegativeMode::kInBatch;
  if (negative_mode == "sampled") return NegativeMode::kSampled;
  throw ConfigError("field 'negative_mode': expected 'in-batch' or 'sampled'");
}

bool AdaptationConfig::adapt_with_sgd() const {
  if (adapt_optimizer == "sgd") return true;
  if (adapt_optimizer == "adam") return false;
  throw ConfigError("field 'adapt_optimizer': expected 'adam' or 'sgd'");
}

DeskEncoderOptions AdaptationConfig::encoder_options(std::size_t max_seq_len) const {
  DeskEncoderOptions o;
  o.buckets = hash_buckets;
  o.embed_dim = embed_dim;
  o.hidden_dim = hidden_dim;
  o.output_dim = output_dim;
  o.max_seq_len = max_seq_len;
  o.embed_init_scale = embed_init_scale;
  return o;
}

void AdaptationConfig::set(std::string_view key, std::string_view value) {
  const Field& f = find_field(key);
  const std::string v = trim(value);
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(this->*member)>;
        if constexpr (std::is_same_v<T, bool>) {
          if (v == "true" || v == "1") {
            this->*member = true;
          } else if (v == "false" || v == "0") {
            this->*member = false;
          } else {
            throw ConfigError("field '" + std::string(key) + "': expected true or false");
          }
        } else if constexpr (std::is_same_v<T, std::string>) {
          this->*member = v;
        } else {
          this->*member = parse_number<T>(key, v);
        }
      },
      f.member);
}

std::string AdaptationConfig::to_text() const {
  std::ostringstream out;
  for (const auto& f : fields()) {
    out << f.key << " = ";
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(this->*member)>;
          if constexpr (std::is_same_v<T, bool>) {
            out << (this->*member ? "true" : "false");
          } else if constexpr (std::is_same_v<T, double>) {
            out << format_double(this->*member);
          } else {
            out << this->*member;
          }
        },
        f.member);
    out << '\n';
  }
  return out.str();
}

void AdaptationConfig::validate() const {
  auto positive = [](const char* name, double v) {
    if (!(v > 0)) throw ConfigError(std::string("field '") + name + "' must be positive");
  };
  auto non_negative = [](const char* name, double v) {
    if (!(v >= 0)) throw ConfigError(std::string("field '") + name + "' must be non-negative");
  };
  positive("num_seeds", num_seeds);
  positive("hash_buckets", hash_buckets);
  positive("embed_dim", embed_dim);
  positive("hidden_dim", hidden_dim);
  positive("output_dim", output_dim);
  positive("embed_init_scale", embed_init_scale);
  non_negative("retriever_output_norm", retriever_output_norm);
  positive("discriminator_hidden", discriminator_hidden);
  if (retriever_batch < 2) throw ConfigError("field 'retriever_batch' must be at least 2");
  positive("reader_batch", reader_batch);
  positive("claim_max_len", claim_max_len);
  positive("doc_max_len", doc_max_len);
  non_negative("lambda1", lambda1);
  non_negative("lambda2", lambda2);
  positive("top_k", top_k);
  positive("pseudo_evidence_p", pseudo_evidence_p);
  (void)negatives();
  (void)adapt_with_sgd();
  positive("sampled_negatives", sampled_negatives);
  positive("pseudo_queries", pseudo_queries);
  non_negative("pretrain_epochs", pretrain_epochs);
  non_negative("retriever_epochs", retriever_epochs);
  non_negative("reader_epochs", reader_epochs);
  non_negative("adapt_steps", adapt_steps);
  non_negative("adapt_warmup", adapt_warmup);
  positive("adapt_batch", adapt_batch);
  positive("lr_retriever", lr_retriever);
  positive("lr_reader", lr_reader);
  positive("lr_discriminator", lr_discriminator);
  positive("lr_adapt", lr_adapt);
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw ConfigError("field 'train_fraction' must lie strictly between 0 and 1");
  }
  positive("evidence_per_claim", evidence_per_claim);
}

AdaptationConfig parse_config(std::string_view text) {
  AdaptationConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("config field '" + key + "' given twice");
    cfg.set(key, std::string_view(s).substr(eq + 1));
  }
  for (const auto& f : fields()) {
    if (!seen.contains(f.key)) throw ConfigError("missing config field '" + std::string(f.key) + "'");
  }
  cfg.validate();
  return cfg;
}

AdaptationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace factda
