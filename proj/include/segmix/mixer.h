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

#ifndef SEGMIX_MIXER_H_
#define SEGMIX_MIXER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segmix/corpus.h"
#include "segmix/embedding.h"
#include "segmix/errors.h"
#include "segmix/pools.h"
#include "segmix/rng.h"

namespace segmix {

enum class Variant { kMention, kToken, kSynonym, kRelation, kWholeSequence };

std::string_view to_string(Variant variant);
// Accepts mention|token|synonym|relation|whole_sequence (and the short forms
// mmix, tmix, smix, rmix, whole).
Variant parse_variant(std::string_view name);

struct VariantWeight {
  Variant variant = Variant::kMention;
  double weight = 1.0;
};

// "mention+token" splits the budget equally unless `weights` ("0.7,0.3") is
// given. Weights are normalised to sum to one.
std::vector<VariantWeight> parse_variants(std::string_view spec,
                                          std::string_view weights = {});

enum class PadPolicy { kZero };

struct MixConfig {
  double alpha = 8.0;
  double rate = 0.2;
  std::vector<VariantWeight> variants = {{Variant::kMention, 1.0}};
  PadPolicy pad_policy = PadPolicy::kZero;
  // Rescale tail label rows (only produced by unequal-length padding) to sum
  // to one.
  bool normalize_tail_labels = false;
  // Only draw partners whose entity type matches the selected segment.
  bool same_type_only = false;
  // Overrides the Beta draw; the draw itself still happens so segment and
  // partner choices are identical across lambda settings.
  std::optional<double> fixed_lambda;
  std::uint64_t seed = 0;
  std::size_t max_retries = 16;
  std::size_t threads = 1;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

class NoEligibleSegmentError : public DataError {
 public:
  NoEligibleSegmentError() : DataError("no eligible segment in example") {}
};

// Rows follow `labels`; a single 1 at each label's vocabulary index.
// Throws std::out_of_range for labels missing from `vocab`.
Matrix one_hot(std::span<const BioLabel> labels, const Vocabulary& vocab);
Vector one_hot(std::string_view label, const Vocabulary& vocab);

// Extends the shorter matrix with zero rows at the end.
std::pair<Matrix, Matrix> pad_to_longer(const Matrix& a, const Matrix& b);

// lambda * a + (1 - lambda) * b for equal shapes.
Matrix mix(const Matrix& a, const Matrix& b, double lambda);

// One Beta(alpha, alpha) draw.
double sample_lambda(double alpha, Rng& rng);

// Segment pools (and the lexicon) consulted by the NER variants. Only the
// ones needed by the configured variants have to be set.
struct MixSources {
  const SegmentPool* mentions = nullptr;
  const SegmentPool* tokens = nullptr;
  const SegmentPool* sentences = nullptr;
  const SynonymLexicon* lexicon = nullptr;
};

// Picks the segment of `sentence` to be mixed, or nullopt when the sentence
// has none for this variant.
std::optional<NominalSpan> select_segment(const Sentence& sentence,
                                          Variant variant,
                                          const SynonymLexicon* lexicon,
                                          Rng& rng);

// Every random choice made for one augmented example. Applying a plan is
// deterministic, which lets mixing and hard replacement share a draw.
struct MixPlan {
  std::size_t source_index = 0;
  Variant variant = Variant::kMention;
  double lambda = 1.0;
  // Segments of the source example (e1 then e2 for relations).
  std::vector<NominalSpan> spans;
  std::vector<std::vector<std::string>> partner_segments;
  std::vector<std::vector<BioLabel>> partner_labels;
  std::string partner_relation;
  std::optional<std::size_t> pool_index;
};

struct Provenance {
  std::size_t source_index = 0;
  Variant variant = Variant::kMention;
  double lambda = 1.0;
  std::vector<NominalSpan> source_spans;
  // Same segments in the coordinates of the mixed example.
  std::vector<NominalSpan> mixed_spans;
  std::optional<std::size_t> pool_index;
  std::vector<std::vector<std::string>> partner_segments;
};

struct MixedExample {
  Matrix embeddings;
  Matrix soft_labels;
  Provenance provenance;
};

struct MixedRESample {
  Matrix embeddings;
  Vector relation_label;
  NominalSpan e1;
  NominalSpan e2;
  Provenance provenance;
};

// Draw order follows the generation algorithm: lambda, own segment, partner.
std::optional<MixPlan> plan_mix(const Sentence& sentence,
                                std::size_t source_index, Variant variant,
                                const MixSources& sources,
                                const MixConfig& config, Rng& rng);
MixPlan plan_re_mix(const RESample& sample, std::size_t source_index,
                    const SegmentPool& pool, const MixConfig& config, Rng& rng);

// The mixed block covers every padded row with positive weight: the longer
// segment for 0 < lambda < 1, the source segment at lambda = 1 and the partner
// at lambda = 0. Rows outside the block are copied unchanged.
MixedExample apply_mix(const Sentence& sentence, const MixPlan& plan,
                       const EmbeddingTable& table,
                       const Vocabulary& label_vocab, const MixConfig& config);
MixedRESample apply_re_mix(const RESample& sample, const MixPlan& plan,
                           const EmbeddingTable& table,
                           const Vocabulary& relation_vocab);

// Verbatim substitution of the partner segments (the lambda = 0 limit).
// Labels are substituted too, except for synonyms.
Sentence apply_replacement(const Sentence& sentence, const MixPlan& plan);
RESample apply_re_replacement(const RESample& sample, const MixPlan& plan);

MixedExample mix_example(const Sentence& sentence, Variant variant,
                         const MixSources& sources, const EmbeddingTable& table,
                         const Vocabulary& label_vocab, const MixConfig& config,
                         Rng& rng, std::size_t source_index = 0);
MixedRESample mix_re_sample(const RESample& sample, const SegmentPool& pool,
                            const EmbeddingTable& table,
                            const Vocabulary& relation_vocab,
                            const MixConfig& config, Rng& rng,
                            std::size_t source_index = 0);

// round(rate * n).
std::size_t augmentation_budget(std::size_t n, double rate);

struct NerGeneration {
  std::vector<MixedExample> examples;
  std::size_t target = 0;
  std::size_t skipped = 0;
};

struct REGeneration {
  std::vector<MixedRESample> examples;
  std::size_t target = 0;
  std::size_t skipped = 0;
};

struct NerReplacement {
  // Raw substitutions. Token-pool replacements may contain orphan I- tags;
  // as_corpus(true) repairs them.
  std::vector<Sentence> sentences;
  std::vector<MixPlan> plans;
  std::size_t target = 0;
  std::size_t skipped = 0;

  TaggedCorpus as_corpus(bool repair_bio = true) const;
};

struct REReplacement {
  RECorpus corpus;
  std::vector<MixPlan> plans;
  std::size_t target = 0;
  std::size_t skipped = 0;
};

// Generation over a corpus. Slot j draws from Rng(seed, "slot", j), so the
// output does not depend on config.threads.
NerGeneration segmix_generate(const TaggedCorpus& corpus,
                              const MixSources& sources,
                              const EmbeddingTable& table,
                              const MixConfig& config);
REGeneration segmix_generate_re(const RECorpus& corpus, const SegmentPool& pool,
                                const EmbeddingTable& table,
                                const MixConfig& config);

NerReplacement replacement_da(const TaggedCorpus& corpus,
                              const MixSources& sources,
                              const MixConfig& config);
REReplacement replacement_da_re(const RECorpus& corpus, const SegmentPool& pool,
                                const MixConfig& config);

}  // namespace segmix

#endif  // SEGMIX_MIXER_H_
