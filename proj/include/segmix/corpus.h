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

#ifndef SEGMIX_CORPUS_H_
#define SEGMIX_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segmix/vocabulary.h"

namespace segmix {

enum class BioKind { kOutside, kBegin, kInside };

// A tag of the BIO scheme: "O", "B-<type>" or "I-<type>".
struct BioLabel {
  BioKind kind = BioKind::kOutside;
  std::string type;  // empty iff kind == kOutside

  static BioLabel outside() { return {}; }
  static BioLabel begin(std::string type) {
    return {BioKind::kBegin, std::move(type)};
  }
  static BioLabel inside(std::string type) {
    return {BioKind::kInside, std::move(type)};
  }
  // Throws std::invalid_argument on anything but the three accepted forms.
  static BioLabel parse(std::string_view text);

  bool is_outside() const { return kind == BioKind::kOutside; }
  std::string str() const;

  friend bool operator==(const BioLabel&, const BioLabel&) = default;
};

std::vector<BioLabel> parse_labels(const std::vector<std::string>& texts);

// Half-open token range [start, end).
struct NominalSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool overlaps(const NominalSpan& other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const NominalSpan&, const NominalSpan&) = default;
};

struct Mention {
  NominalSpan span;
  std::string type;
  friend bool operator==(const Mention&, const Mention&) = default;
};

// Maximal mentions of a label sequence. A chunk opens at B-X, or at an I-X
// that does not continue a chunk of type X (the conlleval reading), so the
// function is total over invalid sequences too.
std::vector<Mention> extract_mentions(std::span<const BioLabel> labels);

// Index of the first I-X not preceded by B-X or I-X, if any.
std::optional<std::size_t> find_bio_violation(std::span<const BioLabel> labels);

// Promotes every orphan I-X to B-X.
void repair_bio(std::vector<BioLabel>& labels);

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<BioLabel> labels;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Throws ValidationError when a Sentence invariant is broken.
void validate_sentence(const Sentence& sentence, std::size_t index = 0);

class TaggedCorpus {
 public:
  TaggedCorpus();
  // Validates every sentence and rebuilds both vocabularies. "O" always
  // holds label index 0; the rest follow first occurrence.
  explicit TaggedCorpus(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const Sentence& operator[](std::size_t i) const { return sentences_[i]; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }

  const Vocabulary& label_vocab() const { return label_vocab_; }
  const Vocabulary& token_vocab() const { return token_vocab_; }

  friend bool operator==(const TaggedCorpus&, const TaggedCorpus&) = default;

 private:
  std::vector<Sentence> sentences_;
  Vocabulary label_vocab_;
  Vocabulary token_vocab_;
};

struct RESample {
  std::vector<std::string> tokens;
  NominalSpan e1;
  NominalSpan e2;
  std::string relation;

  friend bool operator==(const RESample&, const RESample&) = default;
};

void validate_re_sample(const RESample& sample);

class RECorpus {
 public:
  RECorpus() = default;
  explicit RECorpus(std::vector<RESample> samples);

  const std::vector<RESample>& samples() const { return samples_; }
  const RESample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Vocabulary& relation_vocab() const { return relation_vocab_; }
  const Vocabulary& token_vocab() const { return token_vocab_; }

  friend bool operator==(const RECorpus&, const RECorpus&) = default;

 private:
  std::vector<RESample> samples_;
  Vocabulary relation_vocab_;
  Vocabulary token_vocab_;
};

struct ConllOptions {
  // Promote orphan I-X to B-X instead of rejecting the sentence.
  bool repair_bio = false;
};

TaggedCorpus parse_conll(std::istream& in, const ConllOptions& options = {});
RECorpus parse_re(std::istream& in);
void write_conll(const TaggedCorpus& corpus, std::ostream& out);
void write_re(const RECorpus& corpus, std::ostream& out);

TaggedCorpus read_conll_file(const std::filesystem::path& path,
                             const ConllOptions& options = {});
RECorpus read_re_file(const std::filesystem::path& path);

// Uniform subset of `size` examples without replacement, kept in corpus
// order. Throws std::invalid_argument when size exceeds the corpus.
TaggedCorpus downsample(const TaggedCorpus& corpus, std::size_t size,
                        std::uint64_t seed);
RECorpus downsample(const RECorpus& corpus, std::size_t size,
                    std::uint64_t seed);

// Indices picked by downsample, ascending.
std::vector<std::size_t> sample_indices(std::size_t population,
                                        std::size_t size, std::uint64_t seed);

}  // namespace segmix

#endif  // SEGMIX_CORPUS_H_
