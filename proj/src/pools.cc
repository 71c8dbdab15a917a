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

#include "segmix/pools.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

#include "segmix/errors.h"

namespace segmix {

std::string_view to_string(PoolSource source) {
  switch (source) {
    case PoolSource::kMention:
      return "mention";
    case PoolSource::kToken:
      return "token";
    case PoolSource::kSynonym:
      return "synonym";
    case PoolSource::kRelation:
      return "relation";
    case PoolSource::kSentence:
      return "sentence";
  }
  return "unknown";
}

void SegmentPool::add(SegmentTuple tuple) {
  if (tuple.arity() != arity_) {
    throw std::invalid_argument("segment tuple arity " +
                                std::to_string(tuple.arity()) +
                                " does not match pool arity " +
                                std::to_string(arity_));
  }
  entries_.push_back(std::move(tuple));
}

SegmentPool build_mention_pool(const TaggedCorpus& corpus) {
  SegmentPool pool(PoolSource::kMention, 1);
  for (const auto& s : corpus.sentences()) {
    for (const auto& m : extract_mentions(s.labels)) {
      SegmentTuple t;
      t.segments.emplace_back(s.tokens.begin() + m.span.start,
                              s.tokens.begin() + m.span.end);
      t.labels.emplace_back(s.labels.begin() + m.span.start,
                            s.labels.begin() + m.span.end);
      pool.add(std::move(t));
    }
  }
  return pool;
}

SegmentPool build_token_pool(const TaggedCorpus& corpus, bool include_outside) {
  SegmentPool pool(PoolSource::kToken, 1);
  for (const auto& s : corpus.sentences()) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.labels[i].is_outside() && !include_outside) continue;
      SegmentTuple t;
      t.segments.push_back({s.tokens[i]});
      t.labels.push_back({s.labels[i]});
      pool.add(std::move(t));
    }
  }
  return pool;
}

SegmentPool build_relation_pool(const RECorpus& corpus) {
  SegmentPool pool(PoolSource::kRelation, 2);
  for (const auto& s : corpus.samples()) {
    SegmentTuple t;
    t.segments.emplace_back(s.tokens.begin() + s.e1.start,
                            s.tokens.begin() + s.e1.end);
    t.segments.emplace_back(s.tokens.begin() + s.e2.start,
                            s.tokens.begin() + s.e2.end);
    t.relation = s.relation;
    pool.add(std::move(t));
  }
  return pool;
}

SegmentPool build_sentence_pool(const TaggedCorpus& corpus) {
  SegmentPool pool(PoolSource::kSentence, 1);
  for (const auto& s : corpus.sentences()) {
    SegmentTuple t;
    t.segments.push_back(s.tokens);
    t.labels.push_back(s.labels);
    pool.add(std::move(t));
  }
  return pool;
}

std::size_t draw_tuple_index(const SegmentPool& pool, Rng& rng) {
  if (pool.empty()) throw EmptyPoolError();
  return rng.index(pool.size());
}

const SegmentTuple& draw_tuple(const SegmentPool& pool, Rng& rng) {
  return pool[draw_tuple_index(pool, rng)];
}

void write_pool_jsonl(const SegmentPool& pool, std::ostream& out) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& t = pool[i];
    nlohmann::json rec;
    rec["id"] = i;
    rec["source"] = to_string(pool.source());
    rec["segments"] = t.segments;
    if (!t.labels.empty()) {
      auto& labels = rec["labels"] = nlohmann::json::array();
      for (const auto& seq : t.labels) {
        auto arr = nlohmann::json::array();
        for (const auto& l : seq) arr.push_back(l.str());
        labels.push_back(std::move(arr));
      }
    }
    if (!t.relation.empty()) rec["relation"] = t.relation;
    out << rec.dump() << '\n';
  }
}

std::string SynonymLexicon::key(std::string_view token) const {
  std::string k(token);
  if (!case_sensitive_) {
    std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
  }
  return k;
}

void SynonymLexicon::add(std::string_view token,
                         std::vector<std::string> synonyms) {
  if (synonyms.empty()) {
    throw std::invalid_argument("empty synonym list for '" +
                                std::string(token) + "'");
  }
  auto& list = entries_[key(token)];
  for (auto& s : synonyms) list.push_back(std::move(s));
}

const std::vector<std::string>* SynonymLexicon::find(std::string_view token) const {
  auto it = entries_.find(key(token));
  return it == entries_.end() ? nullptr : &it->second;
}

SynonymLexicon SynonymLexicon::load(std::istream& in, bool case_sensitive) {
  SynonymLexicon lexicon(case_sensitive);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(line_no, "expected '<token>\\t<syn1>,<syn2>,...'");
    }
    std::vector<std::string> synonyms;
    std::string_view rest(line);
    rest.remove_prefix(tab + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      if (comma == std::string_view::npos) comma = rest.size();
      std::string_view syn = rest.substr(start, comma - start);
      const auto b = syn.find_first_not_of(" \t");
      if (b != std::string_view::npos) {
        const auto e = syn.find_last_not_of(" \t");
        synonyms.emplace_back(syn.substr(b, e - b + 1));
      }
      start = comma + 1;
    }
    if (synonyms.empty()) throw ParseError(line_no, "empty synonym list");
    lexicon.add(std::string_view(line).substr(0, tab), std::move(synonyms));
  }
  return lexicon;
}

SynonymLexicon read_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return SynonymLexicon::load(in);
}

std::optional<std::string> draw_synonym(const SynonymLexicon& lexicon,
                                        std::string_view token, Rng& rng) {
  const auto* synonyms = lexicon.find(token);
  if (synonyms == nullptr) return std::nullopt;
  return (*synonyms)[rng.index(synonyms->size())];
}

}  // namespace segmix
