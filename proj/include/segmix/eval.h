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

#ifndef SEGMIX_EVAL_H_
#define SEGMIX_EVAL_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segmix/corpus.h"
#include "segmix/embedding.h"

namespace segmix {

// Row-wise argmax (ties go to the lowest index), optionally followed by an
// I-X -> B-X repair of orphan inside tags.
std::vector<BioLabel> decode_labels(const Matrix& scores, const Vocabulary& vocab,
                                    bool repair = false);

struct TypeScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support() const { return tp + fn; }
};

// Token-level type confusion, rows gold, columns predicted. Index 0 is "O".
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> counts;
};

struct EvalReport {
  // Micro-averaged over exact (span, type) matches.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::map<std::string, TypeScore> per_type;
  ConfusionMatrix confusion;

  std::size_t support() const { return tp + fn; }
  std::string to_json() const;
  std::string to_table() const;
};

// CoNLL exact-match scoring. When neither side holds any mention the scores
// are 1 (perfect agreement); otherwise 0/0 resolves to 0.
EvalReport entity_f1(const TaggedCorpus& gold,
                     std::span<const std::vector<BioLabel>> predicted);
// Same, with entity types erased on both sides.
EvalReport span_only_f1(const TaggedCorpus& gold,
                        std::span<const std::vector<BioLabel>> predicted);

ConfusionMatrix confusion_matrix(const TaggedCorpus& gold,
                                 std::span<const std::vector<BioLabel>> predicted);
void write_confusion_csv(const ConfusionMatrix& matrix, std::ostream& out);

// "Cause-Effect(e1,e2)" -> "Cause-Effect"; undirected labels are returned as is.
std::string relation_type(std::string_view label);
// "(e1,e2)", "(e2,e1)" or nullopt for undirected labels such as "Other".
std::optional<std::string> relation_direction(std::string_view label);

struct REAccuracy {
  std::size_t total = 0;
  std::size_t full_hits = 0;
  std::size_t type_hits = 0;
  std::size_t direction_hits = 0;
  double full = 0.0;
  double type_only = 0.0;
  // Pairs where either side is undirected count as direction matches.
  double direction_only = 0.0;

  std::string to_json() const;
};

// `vocab` defaults to the gold corpus relation vocabulary; predictions
// outside it are rejected.
REAccuracy re_accuracy(const RECorpus& gold, std::span<const std::string> predicted,
                       const Vocabulary* vocab = nullptr);

// Vocabulary entry closest (Euclidean) to `vector`; ties go to the lowest
// index. Throws std::invalid_argument for an empty vocabulary.
std::size_t nearest_token_index(const EmbeddingTable& table,
                                const Eigen::Ref<const Vector>& vector);
std::string nearest_token(const EmbeddingTable& table,
                          const Eigen::Ref<const Vector>& vector);

}  // namespace segmix

#endif  // SEGMIX_EVAL_H_
