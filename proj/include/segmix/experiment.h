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

#ifndef SEGMIX_EXPERIMENT_H_
#define SEGMIX_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segmix/corpus.h"
#include "segmix/embedding.h"
#include "segmix/eval.h"
#include "segmix/mixer.h"
#include "segmix/model.h"
#include "segmix/pools.h"

// End-to-end runs: downsample, augment, train, evaluate. Shared by the CLI
// sweep/bench commands and the acceptance suite.
namespace segmix {

std::vector<std::vector<BioLabel>> predict_tags(const TaggerModel& model,
                                                const EmbeddingTable& table,
                                                const Vocabulary& label_vocab,
                                                const TaggedCorpus& corpus);
std::vector<std::string> predict_relations(const REModel& model,
                                           const EmbeddingTable& table,
                                           const Vocabulary& relation_vocab,
                                           const RECorpus& corpus);

// Pools for every NER variant, built from one training corpus.
struct NerPools {
  SegmentPool mentions;
  SegmentPool tokens;
  SegmentPool sentences;

  explicit NerPools(const TaggedCorpus& corpus);
  MixSources sources(const SynonymLexicon* lexicon = nullptr) const {
    return {&mentions, &tokens, &sentences, lexicon};
  }
};

struct NerExperimentConfig {
  // 0 keeps the whole training pool.
  std::size_t train_size = 200;
  // Empty means baseline (no augmentation).
  std::vector<VariantWeight> variants;
  double rate = 0.2;
  double alpha = 8.0;
  std::optional<double> fixed_lambda;
  bool normalize_tail_labels = false;
  std::size_t dim = 32;
  std::size_t window = 1;
  TrainConfig train;
  bool early_stopping = true;
  std::uint64_t seed = 0;
};

struct NerExperimentResult {
  double test_f1 = 0.0;
  double dev_f1 = 0.0;
  std::size_t train_sentences = 0;
  std::size_t augmented = 0;
  std::size_t skipped = 0;
  std::size_t epochs_run = 0;
  double mixing_seconds = 0.0;
  double training_seconds = 0.0;
};

// Named seed derivation: subset, table, mixing and training each draw from
// their own stream of `config.seed`, so baseline and augmented runs with the
// same seed train on the same subset.
NerExperimentResult run_ner_experiment(const TaggedCorpus& train_pool,
                                       const TaggedCorpus& dev,
                                       const TaggedCorpus& test,
                                       const NerExperimentConfig& config,
                                       const SynonymLexicon* lexicon = nullptr);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  // Sample standard deviation; 0 with std_defined == false when count < 2.
  double std = 0.0;
  bool std_defined = false;
};

Summary summarize(std::span<const double> values);

struct SweepConfig {
  std::vector<std::size_t> sizes;
  std::vector<double> rates;
  // Variant specs as accepted by parse_variants, or "none" for the baseline.
  std::vector<std::string> variants;
  std::vector<std::uint64_t> seeds;
  NerExperimentConfig base;
  std::size_t jobs = 1;
};

struct SweepRow {
  std::size_t size = 0;
  double rate = 0.0;
  std::string variant;
  std::uint64_t seed = 0;
  double f1 = 0.0;
  std::size_t augmented = 0;
  std::size_t skipped = 0;
};

struct SweepAggregate {
  std::size_t size = 0;
  double rate = 0.0;
  std::string variant;
  Summary f1;
};

struct SweepOutcome {
  // Completed runs in grid order.
  std::vector<SweepRow> rows;
  // Message of the first failed run, if any.
  std::optional<std::string> error;
};

// Baseline runs ignore the rate and appear once per (size, seed) with rate 0.
SweepOutcome run_sweep(const TaggedCorpus& train_pool, const TaggedCorpus& dev,
                       const TaggedCorpus& test, const SweepConfig& config,
                       const SynonymLexicon* lexicon = nullptr);
std::vector<SweepAggregate> aggregate_sweep(std::span<const SweepRow> rows);

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);
void write_aggregate_csv(std::span<const SweepAggregate> rows, std::ostream& out);

}  // namespace segmix

#endif  // SEGMIX_EXPERIMENT_H_
