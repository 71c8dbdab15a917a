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
#include <random>
#include <set>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "segmix/corpus.h"
#include "segmix/errors.h"
#include "support/oracles.h"

using namespace segmix;

namespace {

TaggedCorpus parse(const std::string& text, ConllOptions options = {}) {
  std::istringstream in(text);
  return parse_conll(in, options);
}

RECorpus parse_relations(const std::string& text) {
  std::istringstream in(text);
  return parse_re(in);
}

const char* kTwoSentences = "New B-LOC\nYork I-LOC\nCity I-LOC\n\nMarcello B-PER\nCuttitta I-PER\n";

}  // namespace

TEST_CASE("bio labels parse and print") {
  CHECK(BioLabel::parse("O") == BioLabel::outside());
  CHECK(BioLabel::parse("B-LOC") == BioLabel::begin("LOC"));
  CHECK(BioLabel::parse("I-ORG") == BioLabel::inside("ORG"));
  CHECK(BioLabel::parse("I-ORG").str() == "I-ORG");
  for (const char* bad : {"", "B", "B-", "X-PER", "b-PER", "O-PER"}) {
    CHECK_THROWS_AS(BioLabel::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("conll parse of two sentences") {
  const TaggedCorpus c = parse(kTwoSentences);
  REQUIRE(c.size() == 2);
  CHECK(c[0].tokens == std::vector<std::string>{"New", "York", "City"});
  const auto m0 = extract_mentions(c[0].labels);
  const auto m1 = extract_mentions(c[1].labels);
  REQUIRE(m0.size() == 1);
  REQUIRE(m1.size() == 1);
  CHECK(m0[0] == Mention{{0, 3}, "LOC"});
  CHECK(m1[0] == Mention{{0, 2}, "PER"});
  CHECK(c.label_vocab().items() ==
        std::vector<std::string>{"O", "B-LOC", "I-LOC", "B-PER", "I-PER"});
}

TEST_CASE("conll parse edge cases") {
  SECTION("empty stream") {
    const TaggedCorpus c = parse("");
    CHECK(c.size() == 0);
    CHECK(c.label_vocab().items() == std::vector<std::string>{"O"});
  }
  SECTION("orphan inside tag is rejected") {
    CHECK_THROWS_AS(parse("a I-LOC\n"), ValidationError);
  }
  SECTION("orphan inside tag is repaired on request") {
    const TaggedCorpus c = parse("a I-LOC\nb I-LOC\n", {.repair_bio = true});
    CHECK(c[0].labels[0] == BioLabel::begin("LOC"));
    CHECK(c[0].labels[1] == BioLabel::inside("LOC"));
  }
  SECTION("type switch inside a run is a violation") {
    CHECK_THROWS_AS(parse("a B-LOC\nb I-PER\n"), ValidationError);
  }
  SECTION("wrong field count reports the line") {
    try {
      parse("a O\nb O extra\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SECTION("bad label reports the line") {
    try {
      parse("a O\n\nb Q-X\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SECTION("docstart lines, tabs, CRLF and repeated blanks") {
    const TaggedCorpus c = parse("-DOCSTART- -X- O O\n\nx\tB-PER\r\ny\tO\r\n\n\n\nz O\n");
    REQUIRE(c.size() == 2);
    CHECK(c[0].tokens == std::vector<std::string>{"x", "y"});
  }
}

TEST_CASE("vocabularies are deterministic across parses") {
  const TaggedCorpus a = parse(kTwoSentences);
  const TaggedCorpus b = parse(kTwoSentences);
  CHECK(a.label_vocab() == b.label_vocab());
  CHECK(a.token_vocab() == b.token_vocab());
}

TEST_CASE("conll round trip") {
  for (const char* text : {kTwoSentences, "", "a O\nb B-X\nc I-X\n\nd O\n"}) {
    const TaggedCorpus c = parse(text);
    std::ostringstream out;
    write_conll(c, out);
    CHECK(parse(out.str()) == c);
  }
  std::mt19937_64 gen(99);
  for (int i = 0; i < 50; ++i) {
    const TaggedCorpus c = testing::random_corpus(gen, 10);
    std::ostringstream out;
    write_conll(c, out);
    CHECK(parse(out.str()) == c);
  }
}

TEST_CASE("relation parse") {
  SECTION("statue and head") {
    const RECorpus c =
        parse_relations("the statue topped by an imposing head\t1\t2\t6\t7\tComponent-Whole(e2,e1)\n");
    REQUIRE(c.size() == 1);
    const RESample& s = c[0];
    CHECK(s.tokens[s.e1.start] == "statue");
    CHECK(s.e1.size() == 1);
    CHECK(s.tokens[s.e2.start] == "head");
    CHECK(s.relation == "Component-Whole(e2,e1)");
  }
  SECTION("empty span") {
    CHECK_THROWS_AS(parse_relations("a b c\t1\t1\t2\t3\tOther\n"), ParseError);
  }
  SECTION("overlapping spans") {
    CHECK_THROWS_AS(parse_relations("a b c\t0\t2\t1\t3\tOther\n"), ParseError);
  }
  SECTION("span out of range") {
    CHECK_THROWS_AS(parse_relations("a b c\t0\t1\t2\t4\tOther\n"), ParseError);
  }
  SECTION("field count") {
    CHECK_THROWS_AS(parse_relations("a b c\t0\t1\t2\t3\n"), ParseError);
  }
  SECTION("non-numeric index") {
    CHECK_THROWS_AS(parse_relations("a b c\t0\tx\t2\t3\tOther\n"), ParseError);
  }
  SECTION("three lines keep first-occurrence order") {
    const RECorpus c = parse_relations(
        "a b c\t0\t1\t2\t3\tOther\n"
        "a b c\t0\t1\t2\t3\tCause-Effect(e1,e2)\n"
        "a b c\t2\t3\t0\t1\tOther\n");
    CHECK(c.size() == 3);
    CHECK(c.relation_vocab().items() == std::vector<std::string>{"Other", "Cause-Effect(e1,e2)"});
  }
}

TEST_CASE("relation round trip") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 30; ++i) {
    const RECorpus c = testing::random_re_corpus(gen, 8);
    std::ostringstream out;
    write_re(c, out);
    CHECK(parse_relations(out.str()) == c);
  }
}

TEST_CASE("mention extraction follows the conlleval reading") {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 500; ++i) {
    const auto tags = testing::random_tags(gen, 1 + i % 12);
    std::vector<BioLabel> labels;
    for (const auto& t : tags) labels.push_back(BioLabel::parse(t));
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> got;
    for (const auto& m : extract_mentions(labels)) got.emplace_back(m.span.start, m.span.end, m.type);
    REQUIRE(got == testing::conlleval_chunks(tags));
  }
}

TEST_CASE("repair leaves a valid sequence with the same chunks") {
  std::mt19937_64 gen(22);
  for (int i = 0; i < 300; ++i) {
    const auto tags = testing::random_tags(gen, 1 + i % 10);
    std::vector<BioLabel> labels;
    for (const auto& t : tags) labels.push_back(BioLabel::parse(t));
    const auto before = extract_mentions(labels);
    repair_bio(labels);
    CHECK_FALSE(find_bio_violation(labels).has_value());
    CHECK(extract_mentions(labels) == before);
  }
}

TEST_CASE("downsample") {
  std::mt19937_64 gen(3);
  std::vector<Sentence> sentences;
  for (int i = 0; i < 1000; ++i) {
    Sentence s = testing::random_sentence(gen);
    s.tokens[0] = "id" + std::to_string(i);
    sentences.push_back(std::move(s));
  }
  const TaggedCorpus corpus(sentences);

  SECTION("full size is a permutation of the corpus") {
    const TaggedCorpus all = downsample(corpus, corpus.size(), 1);
    auto a = all.sentences();
    auto b = corpus.sentences();
    auto key = [](const Sentence& s) { return s.tokens; };
    std::vector<std::vector<std::string>> ka;
    std::vector<std::vector<std::string>> kb;
    for (const auto& s : a) ka.push_back(key(s));
    for (const auto& s : b) kb.push_back(key(s));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    CHECK(ka == kb);
  }
  SECTION("size zero") { CHECK(downsample(corpus, 0, 1).size() == 0); }
  SECTION("size above N") { CHECK_THROWS_AS(downsample(corpus, 1001, 1), std::invalid_argument); }
  SECTION("equal seeds reproduce") { CHECK(downsample(corpus, 200, 9) == downsample(corpus, 200, 9)); }
  SECTION("subsets keep BIO validity and rebuild vocabularies") {
    const TaggedCorpus sub = downsample(corpus, 50, 4);
    std::set<std::string> labels;
    for (const auto& s : sub.sentences()) {
      CHECK_NOTHROW(validate_sentence(s));
      for (const auto& l : s.labels) labels.insert(l.str());
    }
    labels.insert("O");
    CHECK(sub.label_vocab().size() == labels.size());
  }
  SECTION("overlap of two seeds is near the hypergeometric mean") {
    // Expected overlap 200 * 200 / 1000 = 40, variance
    // 200 * 0.2 * 0.8 * 800 / 999 ≈ 25.6. Averaging 20 pairs gives a
    // standard error near 1.1.
    double total = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto a = sample_indices(1000, 200, 2 * s + 100);
      const auto b = sample_indices(1000, 200, 2 * s + 101);
      std::vector<std::size_t> both;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
      CHECK(a != b);
      total += static_cast<double>(both.size());
    }
    CHECK(total / 20.0 == Catch::Approx(40.0).margin(4.0));
  }
  SECTION("indices are sorted and distinct") {
    const auto idx = sample_indices(1000, 300, 77);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  }
}

TEST_CASE("relation downsample") {
  std::mt19937_64 gen(8);
  const RECorpus c = testing::random_re_corpus(gen, 40);
  const RECorpus sub = downsample(c, c.size() / 2, 3);
  CHECK(sub.size() == c.size() / 2);
  CHECK(sub == downsample(c, c.size() / 2, 3));
  CHECK_THROWS_AS(downsample(c, c.size() + 1, 3), std::invalid_argument);
}

TEST_CASE("sentence validation") {
  CHECK_THROWS_AS(validate_sentence(Sentence{}), ValidationError);
  CHECK_THROWS_AS(validate_sentence(Sentence{{"a", "b"}, {BioLabel::outside()}}), ValidationError);
  CHECK_THROWS_AS(validate_sentence(Sentence{{""}, {BioLabel::outside()}}), ValidationError);
  CHECK_THROWS_AS(validate_sentence(Sentence{{"a b"}, {BioLabel::outside()}}), ValidationError);
  CHECK_NOTHROW(validate_sentence(Sentence{{"a"}, {BioLabel::begin("X")}}));
}
