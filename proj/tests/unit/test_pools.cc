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

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "segmix/errors.h"
#include "segmix/pools.h"
#include "support/oracles.h"

using namespace segmix;

namespace {

TaggedCorpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conll(in);
}

const char* kTwoSentences = "New B-LOC\nYork I-LOC\nCity I-LOC\n\nMarcello B-PER\nCuttitta I-PER\n";

}  // namespace

TEST_CASE("mention pool of the two-sentence corpus") {
  const SegmentPool pool = build_mention_pool(parse(kTwoSentences));
  REQUIRE(pool.size() == 2);
  CHECK(pool.arity() == 1);
  CHECK(pool.source() == PoolSource::kMention);
  CHECK(pool[0].segments[0] == std::vector<std::string>{"New", "York", "City"});
  CHECK(testing::label_strings(pool[0].labels[0]) ==
        std::vector<std::string>{"B-LOC", "I-LOC", "I-LOC"});
  CHECK(pool[1].segments[0] == std::vector<std::string>{"Marcello", "Cuttitta"});
  CHECK(testing::label_strings(pool[1].labels[0]) == std::vector<std::string>{"B-PER", "I-PER"});
}

TEST_CASE("token pool of the two-sentence corpus") {
  const SegmentPool pool = build_token_pool(parse(kTwoSentences));
  REQUIRE(pool.size() == 5);
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"New", "B-LOC"}, {"York", "I-LOC"}, {"City", "I-LOC"}, {"Marcello", "B-PER"}, {"Cuttitta", "I-PER"}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(pool[i].segments[0] == std::vector<std::string>{expected[i].first});
    CHECK(pool[i].labels[0][0].str() == expected[i].second);
  }
}

TEST_CASE("all-outside corpus gives empty pools") {
  const TaggedCorpus c = parse("a O\nb O\n\nc O\n");
  CHECK(build_mention_pool(c).empty());
  CHECK(build_token_pool(c).empty());
  CHECK(build_token_pool(c, true).size() == 3);
}

TEST_CASE("hand-written corpus with duplicate mentions") {
  const TaggedCorpus c = parse(
      "John B-PER\nlives O\nin O\nParis B-LOC\n\n"
      "Paris B-LOC\nis O\nbig O\n\n"
      "Acme B-ORG\nCorp I-ORG\nhired O\nJohn B-PER\n\n"
      "Mary B-PER\nhere O\n\n"
      "Acme B-ORG\nCorp I-ORG\n");
  const SegmentPool pool = build_mention_pool(c);
  CHECK(pool.size() == 7);
  CHECK(testing::pool_multiset(pool) == testing::brute_mention_pool(c));
  const SegmentPool tokens = build_token_pool(c);
  CHECK(tokens.size() == 9);
  CHECK(testing::pool_multiset(tokens) == testing::brute_token_pool(c));
}

TEST_CASE("pools match brute-force scanners on random corpora") {
  std::mt19937_64 gen(1234);
  for (int i = 0; i < 50; ++i) {
    const TaggedCorpus c = testing::random_corpus(gen, 20);
    const SegmentPool mentions = build_mention_pool(c);
    const SegmentPool tokens = build_token_pool(c);
    REQUIRE(testing::pool_multiset(mentions) == testing::brute_mention_pool(c));
    REQUIRE(testing::pool_multiset(tokens) == testing::brute_token_pool(c));
    std::size_t begins = 0;
    std::size_t labelled = 0;
    for (const auto& s : c.sentences()) {
      for (const auto& l : s.labels) {
        begins += l.kind == BioKind::kBegin;
        labelled += !l.is_outside();
      }
    }
    CHECK(mentions.size() == begins);
    CHECK(tokens.size() == labelled);
    for (const auto& t : mentions.entries()) {
      CHECK(t.labels[0].front().kind == BioKind::kBegin);
      CHECK_FALSE(find_bio_violation(t.labels[0]).has_value());
      CHECK(t.segments[0].size() == t.labels[0].size());
    }
  }
}

TEST_CASE("relation pool") {
  std::istringstream one("the statue topped by an imposing head\t1\t2\t6\t7\tComponent-Whole(e2,e1)\n");
  const SegmentPool pool = build_relation_pool(parse_re(one));
  REQUIRE(pool.size() == 1);
  CHECK(pool.arity() == 2);
  CHECK(pool[0].segments[0] == std::vector<std::string>{"statue"});
  CHECK(pool[0].segments[1] == std::vector<std::string>{"head"});
  CHECK(pool[0].relation == "Component-Whole(e2,e1)");

  CHECK(build_relation_pool(RECorpus{}).empty());

  std::mt19937_64 gen(55);
  for (int i = 0; i < 50; ++i) {
    const RECorpus c = testing::random_re_corpus(gen, 20);
    const SegmentPool p = build_relation_pool(c);
    CHECK(p.size() == c.size());
    REQUIRE(testing::pool_multiset(p) == testing::brute_relation_pool(c));
  }
}

TEST_CASE("arity is enforced") {
  SegmentPool pool(PoolSource::kMention, 1);
  CHECK_THROWS_AS(pool.add(SegmentTuple{{{"a"}, {"b"}}, {}, "r"}), std::invalid_argument);
}

TEST_CASE("tuple draws") {
  SECTION("empty pool") {
    SegmentPool pool(PoolSource::kMention, 1);
    Rng rng(1);
    try {
      draw_tuple(pool, rng);
      FAIL("expected an error");
    } catch (const EmptyPoolError& e) {
      CHECK(std::string(e.what()) == "empty segment pool");
    }
  }
  SECTION("single entry") {
    const SegmentPool pool = build_mention_pool(parse("a B-X\n"));
    Rng rng(2);
    for (int i = 0; i < 100; ++i) CHECK(draw_tuple_index(pool, rng) == 0);
  }
  SECTION("two entries split evenly") {
    const SegmentPool pool = build_mention_pool(parse(kTwoSentences));
    Rng rng(3);
    int first = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) first += draw_tuple_index(pool, rng) == 0;
    CHECK(static_cast<double>(first) / n == Catch::Approx(0.5).margin(0.03));
  }
  SECTION("seeded draws repeat") {
    const SegmentPool pool = build_token_pool(parse(kTwoSentences));
    Rng a(4);
    Rng b(4);
    for (int i = 0; i < 100; ++i) CHECK(draw_tuple_index(pool, a) == draw_tuple_index(pool, b));
  }
  SECTION("uniform by chi-square") {
    std::mt19937_64 gen(8);
    TaggedCorpus c;
    do {
      c = testing::random_corpus(gen, 20);
    } while (build_token_pool(c).size() < 8);
    const SegmentPool pool = build_token_pool(c);
    Rng rng(5);
    const std::size_t k = pool.size();
    const int n = 20000;
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) ++counts[draw_tuple_index(pool, rng)];
    double chi2 = 0.0;
    const double e = static_cast<double>(n) / static_cast<double>(k);
    for (int x : counts) chi2 += (x - e) * (x - e) / e;
    // Wilson-Hilferty approximation of the upper 1% chi-square point.
    const double df = static_cast<double>(k - 1);
    const double z = 2.3263;
    const double crit = df * std::pow(1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df)), 3);
    CHECK(chi2 < crit);
  }
}

TEST_CASE("pool json dump has one line per tuple") {
  const SegmentPool pool = build_mention_pool(parse(kTwoSentences));
  std::ostringstream out;
  write_pool_jsonl(pool, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.is_object());
    ++lines;
  }
  CHECK(lines == pool.size());
}

TEST_CASE("synonym lexicon") {
  SECTION("direct read") {
    std::istringstream in("buy\tpurchase,acquire\n");
    const SynonymLexicon lex = SynonymLexicon::load(in);
    REQUIRE(lex.find("buy"));
    CHECK(*lex.find("buy") == std::vector<std::string>{"purchase", "acquire"});
    CHECK_FALSE(lex.contains("Buy"));
  }
  SECTION("repeated keys merge") {
    std::istringstream in("buy\tpurchase\nbuy\tacquire\n");
    const SynonymLexicon lex = SynonymLexicon::load(in);
    CHECK(*lex.find("buy") == std::vector<std::string>{"purchase", "acquire"});
  }
  SECTION("case-insensitive mode") {
    std::istringstream in("Buy\tpurchase\n");
    const SynonymLexicon lex = SynonymLexicon::load(in, false);
    CHECK(lex.contains("bUY"));
  }
  SECTION("empty list is an error") {
    std::istringstream in("buy\tpurchase\nsell\t\n");
    try {
      SynonymLexicon::load(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SECTION("100-line file against a recount") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<int> key(0, 59);
    std::uniform_int_distribution<int> nsyn(1, 4);
    std::ostringstream text;
    std::map<std::string, std::size_t> expected;
    for (int i = 0; i < 100; ++i) {
      const std::string k = "k" + std::to_string(key(gen));
      const int m = nsyn(gen);
      text << k << '\t';
      for (int j = 0; j < m; ++j) text << (j ? "," : "") << "s" << i << "_" << j;
      text << '\n';
      expected[k] += static_cast<std::size_t>(m);
    }
    std::istringstream in(text.str());
    const SynonymLexicon lex = SynonymLexicon::load(in);
    CHECK(lex.size() == expected.size());
    CHECK(lex.size() <= 100);
    for (const auto& [k, n] : expected) CHECK(lex.find(k)->size() == n);
  }
}

TEST_CASE("synonym draws") {
  SynonymLexicon lex;
  lex.add("one", {"uno"});
  lex.add("three", {"a", "b", "c"});
  Rng rng(9);
  CHECK_FALSE(draw_synonym(lex, "missing", rng).has_value());
  for (int i = 0; i < 50; ++i) CHECK(draw_synonym(lex, "one", rng) == "uno");
  std::map<std::string, int> counts;
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++counts[*draw_synonym(lex, "three", rng)];
  for (const auto& [s, c] : counts) CHECK(static_cast<double>(c) / n == Catch::Approx(1.0 / 3).margin(0.02));
}
