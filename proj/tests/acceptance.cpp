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

// Acceptance runner: prints one PASS/FAIL line per criterion and exits with
// the number of failures. Under --exit-zero only criteria that raised an
// error count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "factda/checkpoint.hpp"
#include "factda/config.hpp"
#include "factda/encoders.hpp"
#include "factda/eval.hpp"
#include "factda/losses.hpp"
#include "factda/metrics.hpp"
#include "factda/pipeline.hpp"
#include "factda/random.hpp"
#include "factda/synthetic.hpp"
#include "test_support.hpp"

using namespace factda;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Random text over a small vocabulary so that hashed features collide.
std::string random_text(std::mt19937_64& rng, std::size_t max_words) {
  std::uniform_int_distribution<std::size_t> len(1, max_words);
  std::uniform_int_distribution<int> word(0, 29);
  std::string out;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) {
    if (i > 0) out += ' ';
    out += "w" + std::to_string(word(rng));
  }
  return out;
}

Matrix loop_covariance(const Matrix& x) {
  Vector mean = Vector::Zero(x.cols());
  for (Index i = 0; i < x.rows(); ++i) mean += x.row(i).transpose();
  mean /= static_cast<double>(x.rows());
  Matrix c = Matrix::Zero(x.cols(), x.cols());
  for (Index a = 0; a < x.cols(); ++a) {
    for (Index b = 0; b < x.cols(); ++b) {
      for (Index i = 0; i < x.rows(); ++i) c(a, b) += (x(i, a) - mean(a)) * (x(i, b) - mean(b));
      c(a, b) /= static_cast<double>(x.rows() - 1);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------

Outcome loss_oracles() {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const char* name) {
    if (!ok) failed.push_back(name);
  };
  const std::vector<Index> first = {0};
  Matrix s(1, 2);
  s << 0.7, 0.7;
  expect(std::abs(contrastive_loss(s, first) - std::numbers::ln2) < 1e-12, "contrastive ln 2");
  for (int r : {1, 3, 7, 69}) {
    expect(std::abs(contrastive_loss(Matrix::Constant(1, r + 1, -2.5), first) - std::log1p(r)) < 1e-9,
           "contrastive ln(1+r)");
  }
  const Vector half = Vector::Constant(5, 0.5);
  expect(std::abs(discriminator_loss(half, half) - 2.0 * std::numbers::ln2) < 1e-9, "discriminator 2 ln 2");
  expect(std::abs(generator_loss(Vector::Constant(3, 0.5)) - std::numbers::ln2) < 1e-12, "generator ln 2");
  expect(std::isfinite(discriminator_loss(Vector::Zero(3), Vector::Ones(3))), "clamped discriminator");

  Matrix xs(2, 1);
  xs << 0.0, 2.0;
  expect(std::abs(coral_distance(xs, Matrix::Zero(2, 1)) - 1.0) < 1e-10, "coral 1-d");
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + trial % 5;
    const Matrix a = testing::random_matrix(2 + trial % 7, d, rng);
    const Matrix b = testing::random_matrix(3 + trial % 4, d, rng, 2.0);
    const double oracle = (loop_covariance(a) - loop_covariance(b)).squaredNorm() / (4.0 * double(d * d));
    expect(std::abs(coral_distance(a, b) - oracle) < 1e-10, "coral loop oracle");
  }
  const std::vector<int> labels = {0, 2, 1};
  expect(std::abs(cross_entropy(Matrix::Constant(3, 3, 1.0 / 3.0), labels) - std::log(3.0)) < 1e-12,
         "cross entropy ln C");

  if (!failed.empty()) return {false, "failed: " + failed.front()};
  return {true, "contrastive, adversarial, CORAL and cross-entropy oracles hold"};
}

// ---------------------------------------------------------------------------

struct Fraction {
  long long num = 0;
  long long den = 1;
  Fraction operator+(const Fraction& o) const { return reduce(num * o.den + o.num * den, den * o.den); }
  Fraction operator*(const Fraction& o) const { return reduce(num * o.num, den * o.den); }
  static Fraction reduce(long long n, long long d) {
    const long long g = std::gcd(n, d);
    return {n / g, d / g};
  }
  bool operator==(const Fraction&) const = default;
};

Outcome rank_aggregation(const AdaptationConfig& base) {
  // Exact weights of the literal nested sum for k = 3.
  const long long k = 3;
  std::vector<Fraction> exact(k);
  for (long long i = 1; i <= k; ++i) {
    for (long long j = 1; j <= i; ++j) exact[j - 1] = exact[j - 1] + Fraction{1, k} * Fraction{1, i};
  }
  const std::vector<Fraction> want = {{11, 18}, {5, 18}, {2, 18}};
  bool rational = true;
  const auto w = rank_weights(3);
  for (std::size_t j = 0; j < 3; ++j) {
    rational = rational && exact[j] == Fraction::reduce(want[j].num, want[j].den);
    rational = rational && std::abs(w[j] - double(want[j].num) / double(want[j].den)) <= 1e-15;
  }

  AdaptationConfig cfg = testing::tiny_config();
  cfg.uniform_ranking = false;
  cfg.dual_order_inference = base.dual_order_inference;
  const Reader reader = make_desk_reader(cfg, LabelSet::ternary(), 5);
  std::mt19937_64 rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Claim claim{"c", random_text(rng, 6), ""};
    std::vector<EvidenceDocument> docs(1 + static_cast<std::size_t>(trial % 10));
    for (std::size_t j = 0; j < docs.size(); ++j) docs[j] = {"d" + std::to_string(j), random_text(rng, 12), ""};
    const std::size_t kk = 1 + static_cast<std::size_t>(trial % 8);
    const Vector got = rank_weighted_predict(reader, claim, docs, kk, cfg);
    const std::size_t used = std::min(kk, docs.size());
    Vector oracle = Vector::Zero(3);
    for (std::size_t i = 1; i <= used; ++i) {
      Vector inner = Vector::Zero(3);
      for (std::size_t j = 1; j <= i; ++j) inner += predict_pair(reader, claim, docs[j - 1], cfg);
      oracle += inner / double(i);
    }
    oracle /= double(used);
    worst = std::max(worst, (got - oracle).cwiseAbs().maxCoeff());
  }
  return {rational && worst <= 1e-10,
          fmt("rank_weights(3) = [11/18, 5/18, 2/18] %s; max deviation over 1000 instances %.2e",
              rational ? "exactly" : "NOT matched", worst)};
}

// ---------------------------------------------------------------------------

Outcome retriever_adaptation(const AdaptationConfig& base, int seeds) {
  const auto t0 = std::chrono::steady_clock::now();
  int improved = 0;
  double worst_source = 1.0;
  std::string deltas;
  for (int s = 0; s < seeds; ++s) {
    AdaptationConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(s);
    const auto world = make_synthetic_world({}, cfg.seed);
    const BiEncoder init = make_desk_biencoder(cfg, derive_seed(cfg.seed, "pipeline.biencoder"));
    const BiEncoder src = train_source_biencoder(world.source, init, cfg);
    worst_source = std::min(worst_source, evaluate_retriever(src, world.source));
    const double before = evaluate_retriever(src, world.target);
    const double after = evaluate_retriever(adapt_biencoder(src, world.source, world.target, cfg), world.target);
    improved += after - before >= 0.05;
    deltas += fmt("%s%+.3f", s == 0 ? "" : " ", after - before);
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_source >= 0.9 && improved * 5 >= 4 * seeds && secs < 300.0;
  return {pass, fmt("min source NDCG@10 %.3f; target gain >= 0.05 in %d/%d seeds (%s); %.0f s", worst_source,
                    improved, seeds, deltas.c_str(), secs)};
}

// ---------------------------------------------------------------------------

Outcome reader_alignment(const AdaptationConfig& base, int seeds) {
  const auto t0 = std::chrono::steady_clock::now();
  int wins = 0;
  double mean_plain = 0.0, mean_aligned = 0.0, mean_no_reverse = 0.0;
  for (int s = 0; s < seeds; ++s) {
    AdaptationConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(s);
    const auto world = make_synthetic_world({}, cfg.seed);
    const auto source_pairs = labeled_pairs(world.source, SplitPart::kTrain);
    auto target_pairs = labeled_pairs(world.target, SplitPart::kTrain);
    for (auto& p : target_pairs) p.label.reset();
    const Reader init = make_desk_reader(cfg, world.source.label_set, derive_seed(cfg.seed, "pipeline.reader.init"));
    auto run = [&](double lambda, bool reverse) {
      AdaptationConfig c = cfg;
      c.lambda1 = c.lambda2 = lambda;
      c.no_reverse = !reverse;
      const Reader r = train_reader(source_pairs, target_pairs, init, c, derive_seed(cfg.seed, "pipeline.reader.train"));
      return evaluate_reader(r, world.target, c);
    };
    const double plain = run(0.0, true);
    const double aligned = run(0.1, true);
    const double no_reverse = run(0.1, false);
    wins += aligned > plain;
    mean_plain += plain / seeds;
    mean_aligned += aligned / seeds;
    mean_no_reverse += no_reverse / seeds;
  }
  const double secs = seconds_since(t0);
  const bool pass = wins * 5 >= 4 * seeds && mean_aligned >= mean_no_reverse - 0.01 && secs < 300.0;
  return {pass, fmt("lambda 0.1 beats 0 in %d/%d seeds; mean target F1 %.3f (lambda 0) %.3f (lambda 0.1) %.3f "
                    "(without reversal); %.0f s",
                    wins, seeds, mean_plain, mean_aligned, mean_no_reverse, secs)};
}

// ---------------------------------------------------------------------------

Outcome gradient_checks() {
  testing::GradCheck total;
  std::vector<testing::GradCheck> parts(4);
  auto add = [&](std::size_t part, const testing::GradCheck& g) {
    parts[part].checked += g.checked;
    parts[part].passed += g.passed;
    total.checked += g.checked;
    total.passed += g.passed;
  };
  for (int instance = 0; instance < 20; ++instance) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(instance));
    DeskEncoderOptions o;
    o.buckets = 64;
    o.embed_dim = 6;
    o.hidden_dim = 5;
    o.output_dim = 4;
    o.output_norm = instance % 2 == 0 ? 0 : 2;
    DeskEncoder claim_enc(o, rng());
    DeskEncoder doc_enc(o, rng());
    std::vector<Features> claims, docs;
    for (int i = 0; i < 4; ++i) {
      claims.push_back(claim_enc.featurize(random_text(rng, 5)));
      docs.push_back(doc_enc.featurize(random_text(rng, 9)));
    }
    const std::vector<Index> diagonal = {0, 1, 2, 3};

    // Retriever contrastive loss through both encoders.
    auto contrastive = [&] {
      return in_batch_contrastive_loss(claim_enc.forward(claims, nullptr) * doc_enc.forward(docs, nullptr).transpose());
    };
    EncoderTrace tq, td;
    const Matrix q = claim_enc.forward(claims, &tq);
    const Matrix d = doc_enc.forward(docs, &td);
    const Matrix ds = contrastive_loss_grad(Matrix(q * d.transpose()), diagonal);
    Vector gq = Vector::Zero(claim_enc.parameters().size());
    Vector gd = Vector::Zero(doc_enc.parameters().size());
    claim_enc.backward(tq, ds * d, gq);
    doc_enc.backward(td, ds.transpose() * q, gd);
    add(0, testing::check_gradient(contrastive, claim_enc.parameters(), gq, 20, rng()));
    add(0, testing::check_gradient(contrastive, doc_enc.parameters(), gd, 20, rng()));

    // Discriminator loss with respect to the discriminator.
    Discriminator g(4, 6, rng());
    const Matrix xs = testing::random_matrix(5, 4, rng);
    const Matrix xt = testing::random_matrix(6, 4, rng);
    auto disc = [&] { return discriminator_loss(g.predict(xs), g.predict(xt)); };
    const auto ps = g.forward(xs);
    const auto pt = g.forward(xt);
    const auto [dps, dpt] = discriminator_loss_grad(ps.prob, pt.prob);
    Vector gg = Vector::Zero(g.parameters().size());
    g.backward(xs, ps, dps, &gg);
    g.backward(xt, pt, dpt, &gg);
    add(1, testing::check_gradient(disc, g.parameters(), gg, 20, rng()));

    // Generator loss with respect to the target encoder.
    auto gen = [&] { return generator_loss(g.predict(doc_enc.forward(docs, nullptr))); };
    EncoderTrace tg;
    const Matrix vt = doc_enc.forward(docs, &tg);
    const auto pg = g.forward(vt);
    Vector ge = Vector::Zero(doc_enc.parameters().size());
    doc_enc.backward(tg, g.backward(vt, pg, generator_loss_grad(pg.prob), nullptr), ge);
    add(2, testing::check_gradient(gen, doc_enc.parameters(), ge, 20, rng()));

    // Reader loss: cross-entropy plus both alignment terms.
    AdaptationConfig cfg = testing::tiny_config();
    Reader reader = make_desk_reader(cfg, LabelSet::ternary(), rng());
    std::vector<ReaderInput> labeled, us, ut;
    for (int i = 0; i < 4; ++i) {
      labeled.push_back(make_input({random_text(rng, 5), random_text(rng, 9), static_cast<VeracityLabel>(i % 3)},
                                   Origin::kSource, 50, 200));
      us.push_back(make_input({random_text(rng, 5), random_text(rng, 9), std::nullopt}, Origin::kSource, 50, 200));
      ut.push_back(make_input({random_text(rng, 5), random_text(rng, 9), std::nullopt}, Origin::kTarget, 50, 200));
    }
    us = augment_reverse(us);
    ut = augment_reverse(ut);
    auto rl = [&] { return reader_loss(reader, labeled, us, ut, 0.5, 0.5).total; };
    ReaderGradient rg;
    reader_loss(reader, labeled, us, ut, 0.5, 0.5, &rg);
    add(3, testing::check_gradient(rl, reader.encoder().parameters(), rg.encoder, 20, rng()));
    add(3, testing::check_gradient(rl, reader.head().parameters(), rg.head, 10, rng()));
  }
  bool pass = total.pass_rate() >= 0.95;
  for (const auto& p : parts) pass = pass && p.pass_rate() >= 0.95;
  return {pass, fmt("%zu/%zu coordinates within rel 1e-3 (retriever %.3f, discriminator %.3f, generator %.3f, "
                    "reader %.3f) over 20 instances",
                    total.passed, total.checked, parts[0].pass_rate(), parts[1].pass_rate(), parts[2].pass_rate(),
                    parts[3].pass_rate())};
}

// ---------------------------------------------------------------------------

double confusion_oracle(const std::vector<VeracityLabel>& pred, const std::vector<VeracityLabel>& gold) {
  double m[3][3] = {};
  std::set<int> seen;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    m[class_index(gold[i])][class_index(pred[i])] += 1.0;
    seen.insert(class_index(gold[i]));
    seen.insert(class_index(pred[i]));
  }
  double total = 0.0;
  for (int k : seen) {
    double row = 0.0, col = 0.0;
    for (int j = 0; j < 3; ++j) {
      row += m[k][j];
      col += m[j][k];
    }
    const double p = col > 0 ? m[k][k] / col : 0.0;
    const double r = row > 0 ? m[k][k] / row : 0.0;
    total += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
  return total / double(seen.size());
}

Outcome retrieval_and_metrics() {
  std::mt19937_64 rng(31);
  int retrieve_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    DocumentIndex index;
    const Index n = 1 + trial % 40;
    index.vectors = (testing::random_matrix(n, 4, rng) * 2.0).array().round().matrix();
    for (Index i = 0; i < n; ++i) index.ids.push_back("d" + std::to_string((i * 13) % n) + "_" + std::to_string(i));
    const Vector q = testing::random_matrix(4, 1, rng).col(0).array().round().matrix();
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 15);
    std::vector<ScoredDocument> all;
    for (Index i = 0; i < n; ++i) {
      double score = 0.0;
      for (Index j = 0; j < 4; ++j) score += index.vectors(i, j) * q(j);
      all.push_back({index.ids[static_cast<std::size_t>(i)], score});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
    });
    all.resize(std::min(k, all.size()));
    retrieve_ok += retrieve(q, index, k) == all;
  }

  std::uniform_int_distribution<int> label(0, 2);
  double worst_f1 = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<VeracityLabel> gold, pred;
    for (int i = 0; i < 1 + trial % 31; ++i) {
      gold.push_back(static_cast<VeracityLabel>(label(rng)));
      pred.push_back(static_cast<VeracityLabel>(label(rng)));
    }
    worst_f1 = std::max(worst_f1, std::abs(macro_f1(pred, gold, LabelSet::ternary()) - confusion_oracle(pred, gold)));
  }
  const double ndcg = ndcg_at_k({"c", {"a"}, {"x", "a", "y"}});
  const bool pass = retrieve_ok == 200 && worst_f1 <= 1e-12 && std::abs(ndcg - 0.63093) < 5e-6;
  return {pass, fmt("retrieve matches brute force on %d/200; macro F1 deviation %.1e; rank-2 NDCG %.5f", retrieve_ok,
                    worst_f1, ndcg)};
}

// ---------------------------------------------------------------------------

struct AblationRow {
  double full = 0.0, no_retriever = 0.0, no_reader = 0.0, uniform = 0.0;
};

Outcome ablation_grid(const AdaptationConfig& base, int seeds) {
  const auto t0 = std::chrono::steady_clock::now();
  int full_best = 0;
  std::string rows;
  for (int s = 0; s < seeds; ++s) {
    AdaptationConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(s);
    const auto world = make_synthetic_world({}, cfg.seed);
    AblationRow row;
    Pipeline full = train_pipeline(world.source, world.target, cfg);
    row.full = evaluate_pipeline(full, world.target);
    full.config.uniform_ranking = true;
    row.uniform = evaluate_pipeline(full, world.target);
    AdaptationConfig no_ret = cfg;
    no_ret.no_retriever_adapt = true;
    row.no_retriever = evaluate_pipeline(train_pipeline(world.source, world.target, no_ret), world.target);
    AdaptationConfig no_read = cfg;
    no_read.no_reader_adapt = true;
    row.no_reader = evaluate_pipeline(train_pipeline(world.source, world.target, no_read), world.target);
    full_best += row.full >= row.no_retriever && row.full >= row.no_reader && row.full >= row.uniform;
    rows += fmt("%s[%.3f %.3f %.3f %.3f]", s == 0 ? "" : " ", row.full, row.no_retriever, row.no_reader, row.uniform);
  }
  const double secs = seconds_since(t0);
  const bool pass = full_best * 5 >= 3 * seeds && secs < 1200.0;
  return {pass, fmt("Full >= every ablation in %d/%d seeds; target F1 [full, w/o retriever-adapt, w/o reader-adapt, "
                    "uniform] %s; %.0f s",
                    full_best, seeds, rows.c_str(), secs)};
}

// ---------------------------------------------------------------------------

std::vector<std::string> directory_bytes(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::string> out;
  for (const auto& f : files) out.push_back(f.filename().string() + "\n" + read_file(f));
  return out;
}

bool bit_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

Outcome determinism(const AdaptationConfig& base) {
  AdaptationConfig cfg = base;
  cfg.retriever_epochs = 2;
  cfg.reader_epochs = 2;
  cfg.adapt_steps = 20;
  cfg.adapt_warmup = 5;
  SyntheticWorldOptions o;
  o.claims = 60;
  const auto world = make_synthetic_world(o, cfg.seed);

  testing::TempDir d1("acceptance_a"), d2("acceptance_b"), d3("acceptance_c");
  std::vector<std::string> reports;
  for (const auto* dir : {&d1, &d2}) {
    PipelineTraces traces;
    const Pipeline p = train_pipeline(world.source, world.target, cfg, &traces);
    save_pipeline(p, dir->path(), &traces);
    const std::vector<ScenarioReport> r = {make_report(world.source.name, world.target.name, "pipeline", "macro_f1",
                                                       {evaluate_pipeline(p, world.target)},
                                                       p.manifest.hashes.at("config.cfg"))};
    reports.push_back(reports_to_json(r) + reports_to_markdown(r));
  }
  const bool same_run = directory_bytes(d1.path()) == directory_bytes(d2.path()) && reports[0] == reports[1];

  const Pipeline loaded = load_pipeline(d1.path());
  save_pipeline(loaded, d3.path());
  auto without_traces = directory_bytes(d1.path());
  std::erase_if(without_traces, [](const std::string& s) { return s.starts_with("traces.json\n"); });
  bool round_trip = directory_bytes(d3.path()) == without_traces;

  const Pipeline original = train_pipeline(world.source, world.target, cfg);
  for (const auto& lc : world.target.labeled_in(SplitPart::kTest)) {
    round_trip = round_trip && bit_equal(verify(original, lc.claim).distribution, verify(loaded, lc.claim).distribution);
  }
  const Checkpoint ckpt = to_checkpoint(original.reader.encoder());
  const Checkpoint back = deserialize_checkpoint(serialize(ckpt));
  for (std::size_t i = 0; i < ckpt.tensors.size(); ++i) {
    round_trip = round_trip && bit_equal(ckpt.tensors[i].values, back.tensors[i].values);
  }
  round_trip = round_trip && parse_config(cfg.to_text()).to_text() == cfg.to_text();

  return {same_run && round_trip,
          fmt("repeated runs %s; save/load %s", same_run ? "byte-identical (checkpoints, index, manifest, reports)"
                                                         : "DIFFER",
              round_trip ? "bit-exact (files, verdicts, tensors, config)" : "NOT bit-exact")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("factda acceptance criteria");
  std::string config_path = std::string(FACTDA_SOURCE_DIR) + "/configs/synthetic.cfg";
  std::vector<std::string> only;
  app.add_option("--config", config_path, "Benchmark configuration");
  app.add_option("--only", only, "Criteria to run, e.g. A1 A6")->delimiter(',');
  bool exit_zero = false;
  app.add_flag("--exit-zero", exit_zero, "Exit 0 when every criterion reported, even as FAIL");
  CLI11_PARSE(app, argc, argv);

  const AdaptationConfig cfg = load_config(config_path);
  const int seeds = cfg.num_seeds;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", [] { return loss_oracles(); }},
      {"A2", [&] { return rank_aggregation(cfg); }},
      {"A3", [&] { return retriever_adaptation(cfg, seeds); }},
      {"A4", [&] { return reader_alignment(cfg, seeds); }},
      {"A5", [] { return gradient_checks(); }},
      {"A6", [] { return retrieval_and_metrics(); }},
      {"A7", [&] { return ablation_grid(cfg, seeds); }},
      {"A8", [&] { return determinism(cfg); }},
  };
  int failures = 0;
  int ran = 0;
  int errors = 0;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
      ++errors;
    }
    failures += !out.pass;
    ++ran;
    std::printf("%s %s: %s\n", id.c_str(), out.pass ? "PASS" : "FAIL", out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("summary: %d/%d PASS\n", ran - failures, ran);
  return exit_zero ? errors : failures;
}
