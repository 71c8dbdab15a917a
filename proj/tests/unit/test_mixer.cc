// Copyright 2026 The SegMix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "segmix/errors.h"
#include "segmix/mixer.h"
#include "support/oracles.h"

using namespace segmix;

namespace {

TaggedCorpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conll(in);
}

Matrix rows(std::initializer_list<std::initializer_list<double>> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()),
           static_cast<Eigen::Index>(values.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : values) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

EmbeddingTable table_for(const TaggedCorpus& c, std::size_t dim = 8, std::uint64_t seed = 1) {
  return EmbeddingTable::random(c.token_vocab(), dim, seed);
}

MixConfig config_with(Variant v, double rate = 0.2, std::uint64_t seed = 0) {
  MixConfig cfg;
  cfg.variants = {{v, 1.0}};
  cfg.rate = rate;
  cfg.seed = seed;
  return cfg;
}

bool row_sum_in(double sum, double lambda) {
  return std::abs(sum - 1.0) <= 1e-9 || std::abs(sum - lambda) <= 1e-9 ||
         std::abs(sum - (1.0 - lambda)) <= 1e-9;
}

}  // namespace

TEST_CASE("one-hot encoding") {
  const Vocabulary vocab({"O", "B-PER", "I-PER"});
  const std::vector<BioLabel> o = {BioLabel::outside()};
  CHECK(one_hot(o, vocab) == rows({{1, 0, 0}}));
  const std::vector<BioLabel> per = {BioLabel::begin("PER"), BioLabel::inside("PER")};
  CHECK(one_hot(per, vocab) == rows({{0, 1, 0}, {0, 0, 1}}));
  const std::vector<BioLabel> unknown = {BioLabel::begin("LOC")};
  CHECK_THROWS_AS(one_hot(unknown, vocab), std::out_of_range);
  std::mt19937_64 gen(2);
  for (int i = 0; i < 20; ++i) {
    const TaggedCorpus c = testing::random_corpus(gen, 5);
    for (const auto& s : c.sentences()) {
      const Matrix m = one_hot(s.labels, c.label_vocab());
      for (Eigen::Index r = 0; r < m.rows(); ++r) CHECK(m.row(r).sum() == 1.0);
    }
  }
}

TEST_CASE("pad to longer") {
  const Matrix a = rows({{1, 2}});
  const Matrix b = rows({{3, 4}, {5, 6}});
  SECTION("equal lengths are unchanged") {
    auto [x, y] = pad_to_longer(b, b);
    CHECK(x == b);
    CHECK(y == b);
  }
  SECTION("shorter side gains zero rows") {
    auto [x, y] = pad_to_longer(a, b);
    CHECK(x == rows({{1, 2}, {0, 0}}));
    CHECK(y == b);
    auto [p, q] = pad_to_longer(b, a);
    CHECK(p == b);
    CHECK(q == rows({{1, 2}, {0, 0}}));
  }
  SECTION("column mismatch") { CHECK_THROWS_AS(pad_to_longer(a, rows({{1, 2, 3}})), std::invalid_argument); }
  SECTION("random shapes") {
    std::mt19937_64 gen(4);
    std::uniform_int_distribution<int> len(0, 6);
    for (int i = 0; i < 200; ++i) {
      const Matrix x = Matrix::Random(len(gen), 3);
      const Matrix y = Matrix::Random(len(gen), 3);
      auto [px, py] = pad_to_longer(x, y);
      const auto n = std::max(x.rows(), y.rows());
      REQUIRE(px.rows() == n);
      REQUIRE(py.rows() == n);
      CHECK(px.topRows(x.rows()) == x);
      CHECK(px.bottomRows(n - x.rows()).isZero(0.0));
    }
  }
}

TEST_CASE("mix") {
  SECTION("lambda one returns the first operand exactly") {
    const Matrix a = Matrix::Random(4, 5);
    CHECK(mix(a, Matrix::Random(4, 5), 1.0) == a);
  }
  SECTION("convex midpoint") { CHECK(mix(rows({{1, 0}}), rows({{0, 1}}), 0.5) == rows({{0.5, 0.5}})); }
  SECTION("zero padded against a longer block") {
    auto [a, b] = pad_to_longer(rows({{2, 2}}), rows({{4, 0}, {0, 4}}));
    CHECK(mix(a, b, 0.5) == rows({{3, 1}, {0, 2}}));
  }
  SECTION("errors") {
    CHECK_THROWS_AS(mix(rows({{1}}), rows({{1}, {2}}), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(mix(rows({{1}}), rows({{1}}), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(mix(rows({{1}}), rows({{1}}), -0.1), std::invalid_argument);
  }
  SECTION("entries lie between the operands") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const Matrix a = Matrix::Random(3, 4);
      const Matrix b = Matrix::Random(3, 4);
      const double lambda = rng.uniform();
      const Matrix m = mix(a, b, lambda);
      for (Eigen::Index k = 0; k < m.size(); ++k) {
        const double lo = std::min(a.data()[k], b.data()[k]);
        const double hi = std::max(a.data()[k], b.data()[k]);
        REQUIRE(m.data()[k] >= lo - 1e-15);
        REQUIRE(m.data()[k] <= hi + 1e-15);
      }
    }
  }
}

TEST_CASE("embedding lookup") {
  const Vocabulary vocab({"New", "York", "City"});
  const EmbeddingTable table = EmbeddingTable::random(vocab, 6, 11);
  CHECK(table.embed(std::vector<std::string>{}).rows() == 0);
  const Matrix twice = table.embed(std::vector<std::string>{"York", "York"});
  CHECK(twice.row(0) == twice.row(1));
  const Matrix m = table.embed(std::vector<std::string>{"New", "York"});
  CHECK(m.row(0) == table.vectors().row(0));
  CHECK(m.row(1) == table.vectors().row(1));
  const Matrix unk = table.embed(std::vector<std::string>{"Boston", "Boston"});
  CHECK(unk.row(0) == unk.row(1));
  CHECK(unk.row(0) == table.unk_vectors().row(static_cast<Eigen::Index>(table.unk_bucket("Boston"))));
  CHECK(EmbeddingTable::random(vocab, 6, 11) == table);
}

TEST_CASE("segment selection") {
  Rng rng(5);
  SECTION("single mention is always chosen") {
    const TaggedCorpus c = parse("a O\nb B-X\nc I-X\nd O\n");
    for (int i = 0; i < 50; ++i) {
      CHECK(select_segment(c[0], Variant::kMention, nullptr, rng) == NominalSpan{1, 3});
    }
  }
  SECTION("no mention gives none") {
    const TaggedCorpus c = parse("a O\nb O\n");
    CHECK_FALSE(select_segment(c[0], Variant::kMention, nullptr, rng).has_value());
    CHECK_FALSE(select_segment(c[0], Variant::kToken, nullptr, rng).has_value());
    CHECK(select_segment(c[0], Variant::kWholeSequence, nullptr, rng) == NominalSpan{0, 2});
  }
  SECTION("four mentions are picked uniformly") {
    const TaggedCorpus c = parse("a B-X\nb O\nc B-Y\nd I-Y\ne O\nf B-X\ng B-Z\n");
    std::map<std::size_t, int> counts;
    const int n = 10000;
    for (int i = 0; i < n; ++i) ++counts[select_segment(c[0], Variant::kMention, nullptr, rng)->start];
    REQUIRE(counts.size() == 4);
    for (const auto& [start, k] : counts) CHECK(static_cast<double>(k) / n == Catch::Approx(0.25).margin(0.03));
  }
  SECTION("synonym candidates are covered tokens") {
    SynonymLexicon lex;
    lex.add("b", {"bee"});
    const TaggedCorpus c = parse("a O\nb O\nc O\n");
    for (int i = 0; i < 20; ++i) CHECK(select_segment(c[0], Variant::kSynonym, &lex, rng) == NominalSpan{1, 2});
    SynonymLexicon none;
    none.add("zzz", {"y"});
    CHECK_FALSE(select_segment(c[0], Variant::kSynonym, &none, rng).has_value());
  }
}

TEST_CASE("mention mixing of the two-sentence example") {
  const TaggedCorpus c = parse("New B-LOC\nYork I-LOC\nCity I-LOC\n\nMarcello B-PER\nCuttitta I-PER\n");
  SegmentPool pool(PoolSource::kMention, 1);
  pool.add(build_mention_pool(c)[1]);
  const EmbeddingTable table = table_for(c);
  const Vocabulary& vocab = c.label_vocab();
  for (double lambda : {0.3, 0.5, 0.85}) {
    MixConfig cfg = config_with(Variant::kMention);
    cfg.fixed_lambda = lambda;
    Rng rng(1);
    const MixedExample m = mix_example(c[0], Variant::kMention, {&pool}, table, vocab, cfg, rng);
    REQUIRE(m.embeddings.rows() == 3);
    REQUIRE(m.soft_labels.rows() == 3);
    const auto lab = [&](const char* l) { return static_cast<Eigen::Index>(vocab.index_of(l)); };
    CHECK(m.soft_labels(0, lab("B-LOC")) == Catch::Approx(lambda));
    CHECK(m.soft_labels(0, lab("B-PER")) == Catch::Approx(1 - lambda));
    CHECK(m.soft_labels(1, lab("I-LOC")) == Catch::Approx(lambda));
    CHECK(m.soft_labels(1, lab("I-PER")) == Catch::Approx(1 - lambda));
    CHECK(m.soft_labels(2, lab("I-LOC")) == Catch::Approx(lambda));
    CHECK(m.soft_labels.row(2).sum() == Catch::Approx(lambda));
    const auto e = [&](const char* t) -> Eigen::RowVectorXd {
      return table.embed(std::vector<std::string>{t}).row(0);
    };
    CHECK(m.embeddings.row(0).isApprox(lambda * e("New") + (1 - lambda) * e("Marcello")));
    CHECK(m.embeddings.row(1).isApprox(lambda * e("York") + (1 - lambda) * e("Cuttitta")));
    CHECK(m.embeddings.row(2).isApprox(lambda * e("City")));
    CHECK(m.provenance.lambda == lambda);
    CHECK(m.provenance.source_spans == std::vector<NominalSpan>{{0, 3}});
    CHECK(m.provenance.mixed_spans == std::vector<NominalSpan>{{0, 3}});
    CHECK(m.provenance.pool_index == 0u);
  }
}

TEST_CASE("longer partner grows the sequence") {
  const TaggedCorpus c = parse("x O\nParis B-LOC\ny O\n\nSan B-LOC\nJose I-LOC\nCity I-LOC\n");
  SegmentPool pool(PoolSource::kMention, 1);
  pool.add(build_mention_pool(c)[1]);
  MixConfig cfg = config_with(Variant::kMention);
  cfg.fixed_lambda = 0.6;
  Rng rng(2);
  const EmbeddingTable table = table_for(c);
  const MixedExample m = mix_example(c[0], Variant::kMention, {&pool}, table, c.label_vocab(), cfg, rng);
  REQUIRE(m.embeddings.rows() == 5);
  CHECK(m.provenance.mixed_spans == std::vector<NominalSpan>{{1, 4}});
  const Matrix original = table.embed(c[0].tokens);
  CHECK(m.embeddings.row(0) == original.row(0));
  CHECK(m.embeddings.row(4) == original.row(2));
  CHECK(m.soft_labels.row(2).sum() == Catch::Approx(0.4));
  CHECK(m.soft_labels.row(3).sum() == Catch::Approx(0.4));

  cfg.normalize_tail_labels = true;
  Rng again(2);
  const MixedExample n = mix_example(c[0], Variant::kMention, {&pool}, table, c.label_vocab(), cfg, again);
  for (Eigen::Index r = 0; r < n.soft_labels.rows(); ++r) CHECK(n.soft_labels.row(r).sum() == Catch::Approx(1.0));
}

TEST_CASE("lambda limits over random cases") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 200; ++i) {
    const TaggedCorpus c = testing::random_corpus(gen, 8);
    const SegmentPool mentions = build_mention_pool(c);
    const SegmentPool tokens = build_token_pool(c);
    const SegmentPool sentences = build_sentence_pool(c);
    const MixSources sources{&mentions, &tokens, &sentences};
    const EmbeddingTable table = table_for(c, 5, static_cast<std::uint64_t>(i));
    for (Variant v : {Variant::kMention, Variant::kToken, Variant::kWholeSequence}) {
      for (std::size_t k = 0; k < c.size(); ++k) {
        MixConfig cfg = config_with(v);
        Rng rng(static_cast<std::uint64_t>(i), "case", k);
        auto plan = plan_mix(c[k], k, v, sources, cfg, rng);
        if (!plan) continue;
        plan->lambda = 1.0;
        const MixedExample one = apply_mix(c[k], *plan, table, c.label_vocab(), cfg);
        REQUIRE(one.embeddings == table.embed(c[k].tokens));
        REQUIRE(one.soft_labels == one_hot(c[k].labels, c.label_vocab()));
        plan->lambda = 0.0;
        const MixedExample zero = apply_mix(c[k], *plan, table, c.label_vocab(), cfg);
        const Sentence replaced = apply_replacement(c[k], *plan);
        REQUIRE(zero.embeddings == table.embed(replaced.tokens));
        REQUIRE(zero.soft_labels == one_hot(replaced.labels, c.label_vocab()));
      }
    }
  }
}

TEST_CASE("locality and row sums") {
  std::mt19937_64 gen(41);
  for (int i = 0; i < 200; ++i) {
    const TaggedCorpus c = testing::random_corpus(gen, 8);
    const SegmentPool mentions = build_mention_pool(c);
    const SegmentPool tokens = build_token_pool(c);
    const SegmentPool sentences = build_sentence_pool(c);
    const MixSources sources{&mentions, &tokens, &sentences};
    const EmbeddingTable table = table_for(c, 4, 7);
    for (Variant v : {Variant::kMention, Variant::kToken, Variant::kWholeSequence}) {
      const std::size_t k = static_cast<std::size_t>(i) % c.size();
      MixConfig cfg = config_with(v);
      Rng rng(static_cast<std::uint64_t>(i));
      const auto plan = plan_mix(c[k], k, v, sources, cfg, rng);
      if (!plan) continue;
      const MixedExample m = apply_mix(c[k], *plan, table, c.label_vocab(), cfg);
      REQUIRE(m.embeddings.rows() == m.soft_labels.rows());
      const Matrix emb = table.embed(c[k].tokens);
      const Matrix lab = one_hot(c[k].labels, c.label_vocab());
      const NominalSpan src = plan->spans[0];
      const NominalSpan out = m.provenance.mixed_spans[0];
      for (std::size_t r = 0; r < src.start; ++r) {
        REQUIRE(m.embeddings.row(static_cast<Eigen::Index>(r)) == emb.row(static_cast<Eigen::Index>(r)));
        REQUIRE(m.soft_labels.row(static_cast<Eigen::Index>(r)) == lab.row(static_cast<Eigen::Index>(r)));
      }
      for (std::size_t r = src.end; r < c[k].size(); ++r) {
        const auto o = static_cast<Eigen::Index>(out.end + (r - src.end));
        REQUIRE(m.embeddings.row(o) == emb.row(static_cast<Eigen::Index>(r)));
        REQUIRE(m.soft_labels.row(o) == lab.row(static_cast<Eigen::Index>(r)));
      }
      for (Eigen::Index r = 0; r < m.soft_labels.rows(); ++r) {
        REQUIRE(row_sum_in(m.soft_labels.row(r).sum(), plan->lambda));
        REQUIRE(m.soft_labels.row(r).minCoeff() >= 0.0);
        REQUIRE(m.soft_labels.row(r).maxCoeff() <= 1.0);
      }
      if (v == Variant::kWholeSequence) {
        CHECK(out.start == 0);
        CHECK(out.end == static_cast<std::size_t>(m.embeddings.rows()));
      }
    }
  }
}

TEST_CASE("synonym mixing leaves labels alone") {
  const TaggedCorpus c = parse("I O\nbuy O\nbooks O\nin O\nParis B-LOC\n");
  std::istringstream in("buy\tpurchase,acquire\nParis\tLutetia\n");
  const SynonymLexicon lex = SynonymLexicon::load(in);
  Vocabulary vocab = c.token_vocab();
  for (const char* t : {"purchase", "acquire", "Lutetia"}) vocab.add(t);
  const EmbeddingTable table = EmbeddingTable::random(vocab, 6, 3);
  const MixSources sources{nullptr, nullptr, nullptr, &lex};
  MixConfig cfg = config_with(Variant::kSynonym);
  const Matrix labels = one_hot(c[0].labels, c.label_vocab());
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng(s);
    const MixedExample m = mix_example(c[0], Variant::kSynonym, sources, table, c.label_vocab(), cfg, rng);
    CHECK(m.soft_labels == labels);
    CHECK(m.embeddings.rows() == 5);
  }
  SECTION("identity lexicon replacement returns the input") {
    SynonymLexicon identity;
    for (const auto& t : c[0].tokens) identity.add(t, {t});
    MixConfig all = config_with(Variant::kSynonym, 1.0);
    const auto out = replacement_da(c, {nullptr, nullptr, nullptr, &identity}, all);
    REQUIRE(out.sentences.size() == 1);
    CHECK(out.sentences[0] == c[0]);
  }
}

TEST_CASE("replacement of the two-sentence example") {
  const TaggedCorpus c = parse("New B-LOC\nYork I-LOC\nCity I-LOC\n\nMarcello B-PER\nCuttitta I-PER\n");
  const SegmentPool all = build_mention_pool(c);
  SegmentPool pool(PoolSource::kMention, 1);
  pool.add(all[1]);
  MixConfig cfg = config_with(Variant::kMention);
  Rng rng(1);
  const auto plan = plan_mix(c[0], 0, Variant::kMention, {&pool}, cfg, rng);
  REQUIRE(plan);
  const Sentence out = apply_replacement(c[0], *plan);
  CHECK(out.tokens == std::vector<std::string>{"Marcello", "Cuttitta"});
  CHECK(testing::label_strings(out.labels) == std::vector<std::string>{"B-PER", "I-PER"});
}

TEST_CASE("replacement keeps BIO validity for mention pools") {
  std::mt19937_64 gen(61);
  for (int i = 0; i < 100; ++i) {
    const TaggedCorpus c = testing::random_corpus(gen, 15);
    const SegmentPool mentions = build_mention_pool(c);
    if (mentions.empty()) continue;
    MixConfig cfg = config_with(Variant::kMention, 0.5, static_cast<std::uint64_t>(i));
    const auto out = replacement_da(c, {&mentions}, cfg);
    for (const auto& s : out.sentences) REQUIRE_NOTHROW(validate_sentence(s));
    CHECK(out.sentences.size() + out.skipped == out.target);
  }
}

TEST_CASE("token replacement may need repair") {
  const TaggedCorpus c = parse("a B-X\nb O\n\nc B-Y\nd I-Y\n");
  SegmentPool pool(PoolSource::kToken, 1);
  pool.add(build_token_pool(c)[2]);
  MixConfig cfg = config_with(Variant::kToken, 1.0);
  const auto out = replacement_da(c, {nullptr, &pool}, cfg);
  const TaggedCorpus repaired = out.as_corpus(true);
  for (const auto& s : repaired.sentences()) CHECK_FALSE(find_bio_violation(s.labels).has_value());
}

TEST_CASE("same-type partners") {
  const TaggedCorpus c = parse("a B-PER\nb O\n\nc B-LOC\n\nd B-PER\ne I-PER\n");
  const SegmentPool pool = build_mention_pool(c);
  MixConfig cfg = config_with(Variant::kMention);
  cfg.same_type_only = true;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    const auto plan = plan_mix(c[0], 0, Variant::kMention, {&pool}, cfg, rng);
    REQUIRE(plan);
    CHECK(plan->partner_labels[0][0].type == "PER");
  }
}

TEST_CASE("relation mixing") {
  std::istringstream in(
      "the cat sat on the mat\t1\t2\t5\t6\tOther\n"
      "the storm caused big damage\t1\t2\t3\t5\tCause-Effect(e2,e1)\n");
  const RECorpus c = parse_re(in);
  SegmentPool pool(PoolSource::kRelation, 2);
  pool.add(build_relation_pool(c)[1]);
  const EmbeddingTable table = EmbeddingTable::random(c.token_vocab(), 6, 2);
  const Vocabulary& rv = c.relation_vocab();

  SECTION("soft relation label") {
    MixConfig cfg;
    cfg.fixed_lambda = 0.7;
    Rng rng(1);
    const MixedRESample m = mix_re_sample(c[0], pool, table, rv, cfg, rng);
    CHECK(m.relation_label(static_cast<Eigen::Index>(rv.index_of("Other"))) == Catch::Approx(0.7));
    CHECK(m.relation_label(static_cast<Eigen::Index>(rv.index_of("Cause-Effect(e2,e1)"))) == Catch::Approx(0.3));
    CHECK(m.relation_label.sum() == Catch::Approx(1.0));
    // e2 "mat" is shorter than "big damage", so the sequence grows by one.
    CHECK(m.embeddings.rows() == 7);
    CHECK(m.e1 == NominalSpan{1, 2});
    CHECK(m.e2 == NominalSpan{5, 7});
  }
  SECTION("lambda one is the identity") {
    MixConfig cfg;
    cfg.fixed_lambda = 1.0;
    Rng rng(1);
    const MixedRESample m = mix_re_sample(c[0], pool, table, rv, cfg, rng);
    CHECK(m.embeddings == table.embed(c[0].tokens));
    CHECK(m.relation_label == one_hot("Other", rv));
    CHECK(m.e1 == c[0].e1);
    CHECK(m.e2 == c[0].e2);
  }
  SECTION("same relation stays one-hot") {
    Rng rng(1);
    const MixedRESample m = mix_re_sample(c[1], pool, table, rv, MixConfig{}, rng);
    CHECK(m.relation_label == one_hot("Cause-Effect(e2,e1)", rv));
  }
  SECTION("lambda zero equals replacement") {
    MixConfig cfg;
    Rng rng(4);
    MixPlan plan = plan_re_mix(c[0], 0, pool, cfg, rng);
    plan.lambda = 0.0;
    const MixedRESample m = apply_re_mix(c[0], plan, table, rv);
    const RESample r = apply_re_replacement(c[0], plan);
    CHECK(m.embeddings == table.embed(r.tokens));
    CHECK(m.e1 == r.e1);
    CHECK(m.e2 == r.e2);
    CHECK(m.relation_label == one_hot(r.relation, rv));
  }
  SECTION("pool arity") {
    SegmentPool wrong(PoolSource::kMention, 1);
    Rng rng(1);
    CHECK_THROWS_AS(mix_re_sample(c[0], wrong, table, rv, MixConfig{}, rng), std::invalid_argument);
  }
}

TEST_CASE("generation contracts") {
  std::mt19937_64 gen(71);
  std::vector<Sentence> sentences;
  while (sentences.size() < 200) sentences.push_back(testing::random_sentence(gen, 12, 0.4));
  const TaggedCorpus c(sentences);
  const SegmentPool mentions = build_mention_pool(c);
  const SegmentPool tokens = build_token_pool(c);
  const SegmentPool whole = build_sentence_pool(c);
  const MixSources sources{&mentions, &tokens, &whole};
  const EmbeddingTable table = table_for(c);

  SECTION("budget is round(r N)") {
    const auto out = segmix_generate(c, sources, table, config_with(Variant::kMention, 0.2));
    CHECK(out.target == 40);
    CHECK(out.examples.size() + out.skipped == 40);
  }
  SECTION("rate zero") {
    const auto out = segmix_generate(c, sources, table, config_with(Variant::kMention, 0.0));
    CHECK(out.examples.empty());
    CHECK(out.target == 0);
  }
  SECTION("candidates are distinct below rate one") {
    const auto out = segmix_generate(c, sources, table, config_with(Variant::kWholeSequence, 1.0));
    std::vector<std::size_t> ids;
    for (const auto& m : out.examples) ids.push_back(m.provenance.source_index);
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK(ids.size() == 200);
  }
  SECTION("rates above one sample with replacement") {
    const auto out = segmix_generate(c, sources, table, config_with(Variant::kWholeSequence, 1.5));
    CHECK(out.examples.size() == 300);
  }
  SECTION("seeded runs are identical, serial or threaded") {
    MixConfig cfg = config_with(Variant::kMention, 0.3, 9);
    const auto a = segmix_generate(c, sources, table, cfg);
    cfg.threads = 4;
    const auto b = segmix_generate(c, sources, table, cfg);
    REQUIRE(a.examples.size() == b.examples.size());
    for (std::size_t i = 0; i < a.examples.size(); ++i) {
      CHECK(a.examples[i].embeddings == b.examples[i].embeddings);
      CHECK(a.examples[i].soft_labels == b.examples[i].soft_labels);
      CHECK(a.examples[i].provenance.source_index == b.examples[i].provenance.source_index);
      CHECK(a.examples[i].provenance.pool_index == b.examples[i].provenance.pool_index);
      CHECK(a.examples[i].provenance.lambda == b.examples[i].provenance.lambda);
    }
    cfg.seed = 10;
    const auto d = segmix_generate(c, sources, table, cfg);
    CHECK(d.examples[0].provenance.lambda != a.examples[0].provenance.lambda);
  }
  SECTION("combined variants split the budget") {
    MixConfig cfg;
    cfg.rate = 0.2;
    cfg.variants = parse_variants("mention+token");
    const auto out = segmix_generate(c, sources, table, cfg);
    std::map<Variant, std::size_t> per;
    for (const auto& m : out.examples) ++per[m.provenance.variant];
    CHECK(per[Variant::kMention] + per[Variant::kToken] + out.skipped == 40);
    CHECK(per[Variant::kMention] <= 20);
    CHECK(per[Variant::kToken] <= 20);
    cfg.variants = parse_variants("mention+token", "3,1");
    const auto weighted = segmix_generate(c, sources, table, cfg);
    std::map<Variant, std::size_t> w;
    for (const auto& m : weighted.examples) ++w[m.provenance.variant];
    CHECK(w[Variant::kToken] <= 10);
  }
  SECTION("empty pool with positive weight") {
    const SegmentPool empty(PoolSource::kMention, 1);
    CHECK_THROWS_AS(segmix_generate(c, {&empty}, table, config_with(Variant::kMention)), EmptyPoolError);
    CHECK_THROWS_AS(segmix_generate(c, {}, table, config_with(Variant::kMention)), EmptyPoolError);
    CHECK_THROWS_AS(segmix_generate(c, sources, table, config_with(Variant::kSynonym)), DataError);
  }
}

TEST_CASE("slots without an eligible segment are skipped and counted") {
  const TaggedCorpus c = parse("a O\n\nb O\n\nc O\n\nd O\n\ne O\n");
  const TaggedCorpus other = parse("x B-X\n");
  const SegmentPool pool = build_mention_pool(other);
  const EmbeddingTable table = table_for(c);
  const auto out = segmix_generate(c, {&pool}, table, config_with(Variant::kMention, 0.4));
  CHECK(out.target == 2);
  CHECK(out.examples.empty());
  CHECK(out.skipped == 2);
}

TEST_CASE("variant parsing") {
  CHECK(parse_variant("mmix") == Variant::kMention);
  CHECK(parse_variant("whole") == Variant::kWholeSequence);
  CHECK_THROWS_AS(parse_variant("nope"), std::invalid_argument);
  const auto vw = parse_variants("mention+token", "0.7,0.3");
  REQUIRE(vw.size() == 2);
  CHECK(vw[0].weight == Catch::Approx(0.7));
  CHECK(parse_variants("mention+token")[1].weight == Catch::Approx(0.5));
  CHECK_THROWS_AS(parse_variants("mention+token", "1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variants("mention", "-1"), std::invalid_argument);
  MixConfig bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = MixConfig{};
  bad.rate = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = MixConfig{};
  bad.variants = {{Variant::kMention, 0.4}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
