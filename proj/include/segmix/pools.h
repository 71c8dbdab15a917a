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

#ifndef SEGMIX_POOLS_H_
#define SEGMIX_POOLS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segmix/corpus.h"
#include "segmix/rng.h"

namespace segmix {

enum class PoolSource { kMention, kToken, kSynonym, kRelation, kSentence };

std::string_view to_string(PoolSource source);

// One mixing partner: k segments and their labels. NER tuples carry one BIO
// sequence per segment; relation tuples carry a single directed label.
struct SegmentTuple {
  std::vector<std::vector<std::string>> segments;
  std::vector<std::vector<BioLabel>> labels;
  std::string relation;

  std::size_t arity() const { return segments.size(); }
  friend bool operator==(const SegmentTuple&, const SegmentTuple&) = default;
};

class SegmentPool {
 public:
  SegmentPool(PoolSource source, std::size_t arity)
      : source_(source), arity_(arity) {}

  // Throws std::invalid_argument on an arity mismatch.
  void add(SegmentTuple tuple);

  PoolSource source() const { return source_; }
  std::size_t arity() const { return arity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<SegmentTuple>& entries() const { return entries_; }
  const SegmentTuple& operator[](std::size_t i) const { return entries_[i]; }

 private:
  PoolSource source_;
  std::size_t arity_;
  std::vector<SegmentTuple> entries_;
};

// One entry per maximal mention, in corpus order, duplicates kept.
SegmentPool build_mention_pool(const TaggedCorpus& corpus);
// One entry per labelled token; `include_outside` admits O tokens as well.
SegmentPool build_token_pool(const TaggedCorpus& corpus,
                             bool include_outside = false);
SegmentPool build_relation_pool(const RECorpus& corpus);
// Whole sentences, used by the whole-sequence (classic mixup) variant.
SegmentPool build_sentence_pool(const TaggedCorpus& corpus);

// Uniform draw. Throws EmptyPoolError when the pool has no entries.
std::size_t draw_tuple_index(const SegmentPool& pool, Rng& rng);
const SegmentTuple& draw_tuple(const SegmentPool& pool, Rng& rng);

// JSON-lines dump, one tuple per line.
void write_pool_jsonl(const SegmentPool& pool, std::ostream& out);

class SynonymLexicon {
 public:
  explicit SynonymLexicon(bool case_sensitive = true)
      : case_sensitive_(case_sensitive) {}

  // Lines "<token>\t<syn1>,<syn2>,...". Repeated keys extend the list.
  static SynonymLexicon load(std::istream& in, bool case_sensitive = true);

  void add(std::string_view token, std::vector<std::string> synonyms);
  const std::vector<std::string>* find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token) != nullptr; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

 private:
  std::string key(std::string_view token) const;

  bool case_sensitive_;
  std::map<std::string, std::vector<std::string>> entries_;
};

SynonymLexicon read_lexicon_file(const std::string& path);

// Uniform over the token's synonyms; nullopt when the token has no entry.
std::optional<std::string> draw_synonym(const SynonymLexicon& lexicon,
                                        std::string_view token, Rng& rng);

}  // namespace segmix

#endif  // SEGMIX_POOLS_H_
