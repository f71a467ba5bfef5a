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

#ifndef FACTDA_DATA_HPP_
#define FACTDA_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "factda/types.hpp"

namespace factda {

struct EvidenceDocument {
  std::string id;
  std::string text;
  std::string domain;
  friend bool operator==(const EvidenceDocument&, const EvidenceDocument&) = default;
};

struct Claim {
  std::string id;
  std::string text;
  std::string domain;
  friend bool operator==(const Claim&, const Claim&) = default;
};

struct LabeledClaim {
  Claim claim;
  VeracityLabel label = VeracityLabel::kSupport;
  std::vector<std::string> evidence_ids;
  friend bool operator==(const LabeledClaim&, const LabeledClaim&) = default;
};

enum class SplitPart { kTrain, kTest };

std::string_view to_string(SplitPart part);

/// A named set of claims and evidence documents from one domain.
struct DomainCorpus {
  std::string name;
  LabelSet label_set = LabelSet::binary();
  std::vector<LabeledClaim> labeled_claims;
  std::vector<Claim> unlabeled_claims;
  std::vector<EvidenceDocument> documents;
  std::map<std::string, SplitPart> split;

  std::size_t claim_count() const { return labeled_claims.size() + unlabeled_claims.size(); }

  /// Throws IntegrityError when an invariant does not hold.
  void validate() const;

  std::unordered_map<std::string, std::size_t> document_positions() const;
  const EvidenceDocument& document(std::string_view id) const;

  std::vector<LabeledClaim> labeled_in(SplitPart part) const;
  std::vector<Claim> unlabeled_in(SplitPart part) const;
  /// Every claim of the part, labeled or not, with labels stripped.
  std::vector<Claim> claims_in(SplitPart part) const;
  std::vector<Claim> all_claims() const;

  friend bool operator==(const DomainCorpus&, const DomainCorpus&) = default;
};

inline constexpr std::string_view kJsonlV1 = "jsonl-v1";

/// Reads a jsonl-v1 claims file and, optionally, a sidecar documents file
/// of `{id, text, domain}` lines. Evidence entries without text must
/// resolve to a document supplied elsewhere.
DomainCorpus load_corpus(const std::filesystem::path& path, std::string_view format_id = kJsonlV1,
                         const std::optional<std::filesystem::path>& documents_path = std::nullopt);

/// Writes claims to `path` and every document to `documents_path`.
void write_corpus(const DomainCorpus& corpus, const std::filesystem::path& path,
                  const std::filesystem::path& documents_path);

/// `<stem>.docs.jsonl` next to a claims file.
std::filesystem::path sidecar_documents_path(const std::filesystem::path& claims_path);

/// Ordered prefix rules from raw category labels to domain names.
class DomainMappingChart {
 public:
  DomainMappingChart(std::vector<std::pair<std::string, std::string>> rules, std::string fallback);

  /// Parses `prefix => Domain` lines; `* => Domain` sets the fallback.
  static DomainMappingChart parse(std::string_view text);
  static DomainMappingChart load(const std::filesystem::path& path);
  static DomainMappingChart multifc();
  static DomainMappingChart snopes();

  /// Rules sorted longest prefix first; ties keep file order.
  const std::vector<std::pair<std::string, std::string>>& rules() const { return rules_; }
  const std::string& fallback() const { return fallback_; }
  std::vector<std::string> domains() const;

 private:
  std::vector<std::pair<std::string, std::string>> rules_;
  std::string fallback_;
};

std::string map_domain(std::string_view raw_category, const DomainMappingChart& chart);

enum class LabelScheme { kMultifcBinary, kSnopesTernary };

LabelScheme parse_label_scheme(std::string_view name);
LabelSet label_set_of(LabelScheme scheme);

VeracityLabel collapse_label(std::string_view raw_label, LabelScheme scheme);

/// Keeps min(n, |evidence|) evidence ids drawn uniformly without
/// replacement; kept ids stay in their original order.
LabeledClaim sample_evidence(const LabeledClaim& labeled, std::size_t n, std::uint64_t seed);

/// Assigns floor(train_fraction * N) claims to train, stratified by label
/// (unlabeled claims form their own stratum).
DomainCorpus split_corpus(const DomainCorpus& corpus, double train_fraction, std::uint64_t seed);

struct PreprocessOptions {
  LabelScheme scheme = LabelScheme::kMultifcBinary;
  std::size_t evidence_per_claim = 2;
  double train_fraction = 0.6;
  std::uint64_t seed = 13;
};

struct PreprocessResult {
  /// One corpus per chart domain that received at least one claim, sorted by name.
  std::vector<DomainCorpus> corpora;
  /// Records dropped because they carried no evidence text.
  std::size_t skipped = 0;
};

/// Re-purposes a raw dump of `{id, text, category, label, evidence:[{id, text}]}`
/// lines into per-domain corpora: chart-mapped domains, collapsed labels,
/// sampled evidence and a stratified split. Evidence sampling is seeded per
/// claim id, so the output does not depend on record order within a domain.
PreprocessResult preprocess_dump(const std::filesystem::path& dump, const DomainMappingChart& chart,
                                 const PreprocessOptions& options);

}  // namespace factda

#endif  // FACTDA_DATA_HPP_
