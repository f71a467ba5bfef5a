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

#include "factda/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "factda/error.hpp"
#include "factda/random.hpp"

namespace factda {

using nlohmann::json;

std::string_view to_string(SplitPart part) { return part == SplitPart::kTrain ? "train" : "test"; }

// ---------------------------------------------------------------------------
// DomainCorpus

std::unordered_map<std::string, std::size_t> DomainCorpus::document_positions() const {
  std::unordered_map<std::string, std::size_t> pos;
  pos.reserve(documents.size());
  for (std::size_t i = 0; i < documents.size(); ++i) pos.emplace(documents[i].id, i);
  return pos;
}

const EvidenceDocument& DomainCorpus::document(std::string_view id) const {
  for (const auto& d : documents) {
    if (d.id == id) return d;
  }
  throw IntegrityError("unknown document id '" + std::string(id) + "'");
}

void DomainCorpus::validate() const {
  std::set<std::string> doc_ids;
  for (const auto& d : documents) {
    if (d.text.empty()) throw IntegrityError("document '" + d.id + "' has empty text");
    if (!doc_ids.insert(d.id).second) throw IntegrityError("duplicate document id '" + d.id + "'");
  }
  std::set<std::string> claim_ids;
  auto check_claim = [&](const Claim& c) {
    if (c.text.empty()) throw IntegrityError("claim '" + c.id + "' has empty text");
    if (!claim_ids.insert(c.id).second) throw IntegrityError("duplicate claim id '" + c.id + "'");
  };
  for (const auto& lc : labeled_claims) {
    check_claim(lc.claim);
    if (!label_set.contains(lc.label)) {
      throw IntegrityError("claim '" + lc.claim.id + "' has label outside the corpus label set");
    }
    if (lc.evidence_ids.empty()) {
      throw IntegrityError("labeled claim '" + lc.claim.id + "' has no evidence");
    }
    for (const auto& e : lc.evidence_ids) {
      if (!doc_ids.contains(e)) {
        throw IntegrityError("claim '" + lc.claim.id + "' references missing evidence id '" + e + "'");
      }
    }
  }
  for (const auto& c : unlabeled_claims) check_claim(c);
  if (!split.empty() || !claim_ids.empty()) {
    if (split.size() != claim_ids.size()) {
      throw IntegrityError("split does not cover every claim exactly once");
    }
    for (const auto& [id, part] : split) {
      if (!claim_ids.contains(id)) throw IntegrityError("split references unknown claim '" + id + "'");
    }
  }
}

std::vector<LabeledClaim> DomainCorpus::labeled_in(SplitPart part) const {
  std::vector<LabeledClaim> out;
  for (const auto& lc : labeled_claims) {
    if (split.at(lc.claim.id) == part) out.push_back(lc);
  }
  return out;
}

std::vector<Claim> DomainCorpus::unlabeled_in(SplitPart part) const {
  std::vector<Claim> out;
  for (const auto& c : unlabeled_claims) {
    if (split.at(c.id) == part) out.push_back(c);
  }
  return out;
}

std::vector<Claim> DomainCorpus::claims_in(SplitPart part) const {
  std::vector<Claim> out;
  for (const auto& lc : labeled_claims) {
    if (split.at(lc.claim.id) == part) out.push_back(lc.claim);
  }
  for (const auto& c : unlabeled_claims) {
    if (split.at(c.id) == part) out.push_back(c);
  }
  return out;
}

std::vector<Claim> DomainCorpus::all_claims() const {
  std::vector<Claim> out;
  out.reserve(claim_count());
  for (const auto& lc : labeled_claims) out.push_back(lc.claim);
  out.insert(out.end(), unlabeled_claims.begin(), unlabeled_claims.end());
  return out;
}

// ---------------------------------------------------------------------------
// jsonl-v1

namespace {

std::string required_string(const json& obj, const char* key, long line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(std::string("missing or non-string field '") + key + "'", line);
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, long line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string", line);
  return it->get<std::string>();
}

json parse_line(const std::string& text, long line) {
  try {
    json obj = json::parse(text);
    if (!obj.is_object()) throw ParseError("record is not a JSON object", line);
    return obj;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

class DocumentPool {
 public:
  void add(EvidenceDocument doc, long line) {
    if (doc.text.empty()) throw ParseError("document '" + doc.id + "' has empty text", line);
    auto [it, inserted] = positions_.emplace(doc.id, docs_.size());
    if (inserted) {
      docs_.push_back(std::move(doc));
    } else if (docs_[it->second].text != doc.text) {
      throw IntegrityError("document id '" + doc.id + "' appears with conflicting text");
    }
  }
  bool contains(const std::string& id) const { return positions_.contains(id); }
  std::vector<EvidenceDocument> take() { return std::move(docs_); }

 private:
  std::vector<EvidenceDocument> docs_;
  std::unordered_map<std::string, std::size_t> positions_;
};

void load_documents_file(const std::filesystem::path& path, DocumentPool& pool) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open documents file '" + path.string() + "'");
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const json obj = parse_line(text, line);
    pool.add({required_string(obj, "id", line), required_string(obj, "text", line),
              optional_string(obj, "domain", line).value_or("")},
             line);
  }
}

}  // namespace

std::filesystem::path sidecar_documents_path(const std::filesystem::path& claims_path) {
  auto p = claims_path;
  p.replace_extension();
  return std::filesystem::path(p.string() + ".docs.jsonl");
}

DomainCorpus load_corpus(const std::filesystem::path& path, std::string_view format_id,
                         const std::optional<std::filesystem::path>& documents_path) {
  if (format_id != kJsonlV1) throw ParseError("unsupported corpus format '" + std::string(format_id) + "'");
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file '" + path.string() + "'");

  DomainCorpus corpus;
  corpus.name = path.stem().string();
  DocumentPool pool;
  if (documents_path) load_documents_file(*documents_path, pool);

  std::optional<LabelSet> declared;
  bool saw_neutral = false;
  std::size_t with_split = 0;
  std::size_t records = 0;
  std::vector<std::pair<std::string, long>> references;
  std::set<std::string> claim_ids;

  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const json obj = parse_line(text, line);
    if (auto meta = obj.find("corpus"); meta != obj.end()) {
      if (records > 0) throw ParseError("corpus header must be the first record", line);
      if (auto n = meta->find("name"); n != meta->end() && n->is_string()) corpus.name = n->get<std::string>();
      if (auto l = meta->find("labels"); l != meta->end()) {
        if (!l->is_array()) throw ParseError("'labels' must be an array", line);
        declared = LabelSet::with_classes(static_cast<int>(l->size()));
      }
      continue;
    }
    ++records;
    Claim claim{required_string(obj, "id", line), required_string(obj, "text", line),
                optional_string(obj, "domain", line).value_or("")};
    if (claim.text.empty()) throw ParseError("claim '" + claim.id + "' has empty text", line);
    if (!claim_ids.insert(claim.id).second) {
      throw IntegrityError("line " + std::to_string(line) + ": duplicate claim id '" + claim.id + "'");
    }

    std::vector<std::string> relevant;
    if (auto ev = obj.find("evidence"); ev != obj.end()) {
      if (!ev->is_array()) throw ParseError("'evidence' must be an array", line);
      for (const auto& entry : *ev) {
        if (!entry.is_object()) throw ParseError("evidence entry must be an object", line);
        const std::string id = required_string(entry, "id", line);
        if (auto t = optional_string(entry, "text", line)) {
          pool.add({id, *t, optional_string(entry, "domain", line).value_or(claim.domain)}, line);
        } else {
          references.emplace_back(id, line);
        }
        bool is_relevant = true;
        if (auto r = entry.find("relevant"); r != entry.end()) {
          if (!r->is_boolean()) throw ParseError("'relevant' must be a boolean", line);
          is_relevant = r->get<bool>();
        }
        if (is_relevant) relevant.push_back(id);
      }
    }

    if (auto s = optional_string(obj, "split", line)) {
      ++with_split;
      if (*s == "train") {
        corpus.split[claim.id] = SplitPart::kTrain;
      } else if (*s == "test") {
        corpus.split[claim.id] = SplitPart::kTest;
      } else {
        throw ParseError("split must be 'train' or 'test'", line);
      }
    }

    if (auto raw = optional_string(obj, "label", line)) {
      auto label = parse_label(*raw);
      if (!label) throw ParseError("unknown label '" + *raw + "'", line);
      if (*label == VeracityLabel::kNeutral) saw_neutral = true;
      if (relevant.empty()) {
        throw IntegrityError("line " + std::to_string(line) + ": labeled claim '" + claim.id +
                             "' has no relevant evidence");
      }
      corpus.labeled_claims.push_back({std::move(claim), *label, std::move(relevant)});
    } else {
      corpus.unlabeled_claims.push_back(std::move(claim));
    }
  }

  for (const auto& [id, ref_line] : references) {
    if (!pool.contains(id)) {
      throw IntegrityError("line " + std::to_string(ref_line) + ": dangling evidence id '" + id + "'");
    }
  }
  if (with_split != 0 && with_split != records) {
    throw ParseError("either every record or no record may carry a split");
  }
  if (with_split == 0) {
    for (const auto& lc : corpus.labeled_claims) corpus.split[lc.claim.id] = SplitPart::kTrain;
    for (const auto& c : corpus.unlabeled_claims) corpus.split[c.id] = SplitPart::kTrain;
  }
  corpus.documents = pool.take();
  corpus.label_set = declared.value_or(saw_neutral ? LabelSet::ternary() : LabelSet::binary());
  corpus.validate();
  return corpus;
}

void write_corpus(const DomainCorpus& corpus, const std::filesystem::path& path,
                  const std::filesystem::path& documents_path) {
  corpus.validate();
  std::ofstream docs(documents_path, std::ios::trunc);
  if (!docs) throw Error("cannot write '" + documents_path.string() + "'");
  for (const auto& d : corpus.documents) {
    docs << json{{"id", d.id}, {"text", d.text}, {"domain", d.domain}}.dump() << '\n';
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  json labels = json::array();
  for (auto l : corpus.label_set.labels()) labels.push_back(std::string(to_string(l)));
  out << json{{"corpus", {{"name", corpus.name}, {"labels", labels}}}}.dump() << '\n';
  for (const auto& lc : corpus.labeled_claims) {
    json ev = json::array();
    for (const auto& id : lc.evidence_ids) ev.push_back({{"id", id}, {"relevant", true}});
    out << json{{"id", lc.claim.id},
                {"text", lc.claim.text},
                {"domain", lc.claim.domain},
                {"label", std::string(to_string(lc.label))},
                {"evidence", ev},
                {"split", std::string(to_string(corpus.split.at(lc.claim.id)))}}
               .dump()
        << '\n';
  }
  for (const auto& c : corpus.unlabeled_claims) {
    out << json{{"id", c.id},
                {"text", c.text},
                {"domain", c.domain},
                {"evidence", json::array()},
                {"split", std::string(to_string(corpus.split.at(c.id)))}}
               .dump()
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Domain mapping

DomainMappingChart::DomainMappingChart(std::vector<std::pair<std::string, std::string>> rules,
                                       std::string fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {
  if (fallback_.empty()) throw ConfigError("domain mapping chart needs a fallback domain");
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

DomainMappingChart DomainMappingChart::parse(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> rules;
  std::string fallback;
  std::istringstream in{std::string(text)};
  std::string raw;
  long line = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto arrow = s.find("=>");
    if (arrow == std::string::npos) throw ParseError("chart rule needs 'prefix => Domain'", line);
    std::string prefix = trim(s.substr(0, arrow));
    std::string domain = trim(s.substr(arrow + 2));
    if (prefix.empty() || domain.empty()) throw ParseError("empty prefix or domain in chart rule", line);
    if (prefix == "*") {
      fallback = std::move(domain);
    } else {
      rules.emplace_back(std::move(prefix), std::move(domain));
    }
  }
  if (fallback.empty()) throw ConfigError("domain mapping chart has no '* => Domain' fallback");
  return DomainMappingChart(std::move(rules), std::move(fallback));
}

DomainMappingChart DomainMappingChart::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open chart '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

DomainMappingChart DomainMappingChart::multifc() {
  return DomainMappingChart({{"/Arts & Entertainment", "Arts"},
                             {"/Finance", "Business"},
                             {"/Business", "Business"},
                             {"/News/Business News", "Business"},
                             {"/Law & Government", "Politics"},
                             {"/News/Politics", "Politics"},
                             {"/Sensitive Subjects", "Sensitive"}},
                            "Misc");
}

DomainMappingChart DomainMappingChart::snopes() {
  return DomainMappingChart({{"/News/Politics/Other", "News"},
                             {"/News/Politics/Campaigns & Elections", "News"},
                             {"/Law & Government/Government/Executive Branch", "News"},
                             {"/Law & Government/Public Safety/Crime & Justice", "News"},
                             {"/News/Other", "News"}},
                            "General");
}

std::vector<std::string> DomainMappingChart::domains() const {
  std::vector<std::string> out;
  for (const auto& [prefix, domain] : rules_) {
    if (std::find(out.begin(), out.end(), domain) == out.end()) out.push_back(domain);
  }
  if (std::find(out.begin(), out.end(), fallback_) == out.end()) out.push_back(fallback_);
  std::sort(out.begin(), out.end());
  return out;
}

std::string map_domain(std::string_view raw_category, const DomainMappingChart& chart) {
  for (const auto& [prefix, domain] : chart.rules()) {
    if (raw_category.starts_with(prefix)) return domain;
  }
  return chart.fallback();
}

// ---------------------------------------------------------------------------
// Labels

LabelScheme parse_label_scheme(std::string_view name) {
  if (name == "multifc-binary") return LabelScheme::kMultifcBinary;
  if (name == "snopes-ternary") return LabelScheme::kSnopesTernary;
  throw ConfigError("unknown label scheme '" + std::string(name) + "'");
}

LabelSet label_set_of(LabelScheme scheme) {
  return scheme == LabelScheme::kMultifcBinary ? LabelSet::binary() : LabelSet::ternary();
}

VeracityLabel collapse_label(std::string_view raw_label, LabelScheme scheme) {
  std::string s(raw_label);
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  if (scheme == LabelScheme::kMultifcBinary) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s == "true" ? VeracityLabel::kSupport : VeracityLabel::kRefute;
  }
  if (auto label = parse_label(s)) return *label;
  throw LabelError("unknown raw label '" + std::string(raw_label) + "' for snopes-ternary");
}

// ---------------------------------------------------------------------------
// Evidence sampling and splits

LabeledClaim sample_evidence(const LabeledClaim& labeled, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("sample_evidence needs n >= 1");
  LabeledClaim out = labeled;
  if (labeled.evidence_ids.size() <= n) return out;
  out.evidence_ids.clear();
  std::mt19937_64 rng(seed);
  std::sample(labeled.evidence_ids.begin(), labeled.evidence_ids.end(),
              std::back_inserter(out.evidence_ids), n, rng);
  return out;
}

DomainCorpus split_corpus(const DomainCorpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw SplitError("train fraction must lie strictly between 0 and 1");
  }
  const std::size_t total = corpus.claim_count();
  if (total < 2) throw SplitError("need at least 2 claims to split");

  // Strata: one per label in label order, then unlabeled claims.
  std::vector<std::vector<std::string>> strata(4);
  for (const auto& lc : corpus.labeled_claims) strata[class_index(lc.label)].push_back(lc.claim.id);
  for (const auto& c : corpus.unlabeled_claims) strata[3].push_back(c.id);

  constexpr double kSlack = 1e-9;
  const auto target = static_cast<std::size_t>(std::floor(train_fraction * double(total) + kSlack));
  std::vector<std::size_t> take(strata.size());
  std::vector<double> frac(strata.size());
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const double exact = train_fraction * double(strata[s].size());
    take[s] = static_cast<std::size_t>(std::floor(exact + kSlack));
    frac[s] = exact - double(take[s]);
    assigned += take[s];
  }
  std::vector<std::size_t> order(strata.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; assigned < target && i < order.size(); ++i) {
    if (take[order[i]] < strata[order[i]].size()) {
      ++take[order[i]];
      ++assigned;
    }
  }

  DomainCorpus out = corpus;
  out.split.clear();
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    auto ids = strata[s];
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out.split[ids[i]] = i < take[s] ? SplitPart::kTrain : SplitPart::kTest;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Raw dump preprocessing

PreprocessResult preprocess_dump(const std::filesystem::path& dump, const DomainMappingChart& chart,
                                 const PreprocessOptions& options) {
  if (options.evidence_per_claim == 0) throw ConfigError("evidence_per_claim must be at least 1");
  std::ifstream in(dump);
  if (!in) throw ParseError("cannot open dump '" + dump.string() + "'");

  struct Bucket {
    DomainCorpus corpus;
    DocumentPool pool;
    std::set<std::string> claim_ids;
  };
  std::map<std::string, Bucket> buckets;
  PreprocessResult result;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    const json obj = parse_line(text, line);
    const std::string domain = map_domain(required_string(obj, "category", line), chart);
    Claim claim{required_string(obj, "id", line), required_string(obj, "text", line), domain};
    if (claim.text.empty()) throw ParseError("claim '" + claim.id + "' has empty text", line);
    const VeracityLabel label = collapse_label(required_string(obj, "label", line), options.scheme);

    std::vector<EvidenceDocument> evidence;
    if (auto ev = obj.find("evidence"); ev != obj.end()) {
      if (!ev->is_array()) throw ParseError("'evidence' must be an array", line);
      for (const auto& entry : *ev) {
        if (!entry.is_object()) throw ParseError("evidence entry must be an object", line);
        evidence.push_back({required_string(entry, "id", line), required_string(entry, "text", line), domain});
      }
    }
    if (evidence.empty()) {
      ++result.skipped;
      continue;
    }

    Bucket& b = buckets[domain];
    if (!b.claim_ids.insert(claim.id).second) {
      throw IntegrityError("line " + std::to_string(line) + ": duplicate claim id '" + claim.id + "'");
    }
    LabeledClaim full{claim, label, {}};
    for (const auto& d : evidence) full.evidence_ids.push_back(d.id);
    LabeledClaim kept = sample_evidence(full, options.evidence_per_claim, derive_seed(options.seed, claim.id));
    for (const auto& d : evidence) {
      if (std::find(kept.evidence_ids.begin(), kept.evidence_ids.end(), d.id) != kept.evidence_ids.end()) {
        b.pool.add(d, line);
      }
    }
    b.corpus.labeled_claims.push_back(std::move(kept));
  }

  for (auto& [domain, b] : buckets) {
    b.corpus.name = domain;
    b.corpus.label_set = label_set_of(options.scheme);
    b.corpus.documents = b.pool.take();
    for (const auto& lc : b.corpus.labeled_claims) b.corpus.split[lc.claim.id] = SplitPart::kTrain;
    result.corpora.push_back(split_corpus(b.corpus, options.train_fraction, options.seed));
  }
  return result;
}

}  // namespace factda
