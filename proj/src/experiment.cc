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

#include "segmix/experiment.h"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

namespace segmix {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct RunSpec {
  std::size_t size = 0;
  double rate = 0.0;
  std::string variant;
  std::uint64_t seed = 0;
};

}  // namespace

std::vector<std::vector<BioLabel>> predict_tags(const TaggerModel& model,
                                                const EmbeddingTable& table,
                                                const Vocabulary& label_vocab,
                                                const TaggedCorpus& corpus) {
  std::vector<std::vector<BioLabel>> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) {
    out.push_back(decode_labels(model.forward(table.embed(s.tokens)), label_vocab));
  }
  return out;
}

std::vector<std::string> predict_relations(const REModel& model,
                                           const EmbeddingTable& table,
                                           const Vocabulary& relation_vocab,
                                           const RECorpus& corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.samples()) {
    const Vector logits = model.forward(table.embed(s.tokens), s.e1, s.e2);
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.size(); ++c) {
      if (logits(c) > logits(best)) best = c;
    }
    out.push_back(relation_vocab.at(static_cast<std::size_t>(best)));
  }
  return out;
}

NerPools::NerPools(const TaggedCorpus& corpus)
    : mentions(build_mention_pool(corpus)),
      tokens(build_token_pool(corpus)),
      sentences(build_sentence_pool(corpus)) {}

NerExperimentResult run_ner_experiment(const TaggedCorpus& train_pool,
                                       const TaggedCorpus& dev,
                                       const TaggedCorpus& test,
                                       const NerExperimentConfig& config,
                                       const SynonymLexicon* lexicon) {
  const TaggedCorpus train =
      config.train_size == 0
          ? train_pool
          : downsample(train_pool, config.train_size, derive_seed(config.seed, "subset"));
  const EmbeddingTable table = EmbeddingTable::random(
      train.token_vocab(), config.dim, derive_seed(config.seed, "table"));
  const Vocabulary& labels = train.label_vocab();

  NerExperimentResult result;
  result.train_sentences = train.size();
  std::vector<TaggerExample> data;
  data.reserve(train.size());
  for (const auto& s : train.sentences()) data.push_back(make_tagger_example(s, table, labels));

  if (!config.variants.empty() && config.rate > 0.0) {
    const auto start = std::chrono::steady_clock::now();
    const NerPools pools(train);
    MixConfig mix;
    mix.alpha = config.alpha;
    mix.rate = config.rate;
    mix.variants = config.variants;
    mix.fixed_lambda = config.fixed_lambda;
    mix.normalize_tail_labels = config.normalize_tail_labels;
    mix.seed = derive_seed(config.seed, "mix");
    NerGeneration generated = segmix_generate(train, pools.sources(lexicon), table, mix);
    result.mixing_seconds = seconds_since(start);
    result.augmented = generated.examples.size();
    result.skipped = generated.skipped;
    for (const auto& ex : generated.examples) data.push_back(make_tagger_example(ex));
  }

  TaggerModel model(config.dim, config.window, labels.size());
  TrainConfig train_config = config.train;
  train_config.seed = derive_seed(config.seed, "train");
  TaggerValidator validator;
  if (config.early_stopping && !dev.empty()) {
    validator = [&](const TaggerModel& m) {
      return entity_f1(dev, predict_tags(m, table, labels, dev)).f1;
    };
  }
  const auto start = std::chrono::steady_clock::now();
  const TrainResult trained = segmix::train(model, data, train_config, validator);
  result.training_seconds = seconds_since(start);
  result.epochs_run = trained.trace.size();
  if (!dev.empty()) result.dev_f1 = entity_f1(dev, predict_tags(model, table, labels, dev)).f1;
  result.test_f1 = entity_f1(test, predict_tags(model, table, labels, test)).f1;
  return result;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.std_defined = true;
  }
  return s;
}

SweepOutcome run_sweep(const TaggedCorpus& train_pool, const TaggedCorpus& dev,
                       const TaggedCorpus& test, const SweepConfig& config,
                       const SynonymLexicon* lexicon) {
  std::vector<RunSpec> specs;
  for (std::size_t size : config.sizes) {
    for (const auto& variant : config.variants) {
      if (variant == "none") {
        for (auto seed : config.seeds) specs.push_back({size, 0.0, variant, seed});
        continue;
      }
      for (double rate : config.rates) {
        for (auto seed : config.seeds) specs.push_back({size, rate, variant, seed});
      }
    }
  }

  std::vector<std::optional<SweepRow>> rows(specs.size());
  std::vector<std::optional<std::string>> errors(specs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size() || failed.load()) return;
      const RunSpec& spec = specs[i];
      try {
        NerExperimentConfig run = config.base;
        run.train_size = spec.size;
        run.rate = spec.rate;
        run.seed = spec.seed;
        run.variants.clear();
        if (spec.variant != "none") run.variants = parse_variants(spec.variant);
        const auto result = run_ner_experiment(train_pool, dev, test, run, lexicon);
        rows[i] = SweepRow{spec.size, spec.rate, spec.variant, spec.seed,
                           result.test_f1, result.augmented, result.skipped};
      } catch (const std::exception& e) {
        errors[i] = fmt::format("run size={} rate={} variant={} seed={}: {}", spec.size,
                                spec.rate, spec.variant, spec.seed, e.what());
        failed.store(true);
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, specs.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepOutcome outcome;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (rows[i]) outcome.rows.push_back(std::move(*rows[i]));
    if (errors[i] && !outcome.error) outcome.error = errors[i];
  }
  return outcome;
}

std::vector<SweepAggregate> aggregate_sweep(std::span<const SweepRow> rows) {
  // Groups keep first-appearance order.
  std::vector<SweepAggregate> out;
  std::vector<std::vector<double>> values;
  std::map<std::tuple<std::size_t, double, std::string>, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.size, r.rate, r.variant);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.size, r.rate, r.variant, {}});
      values.emplace_back();
    }
    values[it->second].push_back(r.f1);
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].f1 = summarize(values[k]);
  return out;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "size,rate,variant,seed,f1,augmented,skipped\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{:.4f},{},{},{:.6f},{},{}\n", r.size, r.rate, r.variant,
                       r.seed, r.f1, r.augmented, r.skipped);
  }
}

void write_aggregate_csv(std::span<const SweepAggregate> rows, std::ostream& out) {
  out << "size,rate,variant,runs,f1_mean,f1_std,std_defined\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{:.4f},{},{},{:.6f},{:.6f},{}\n", r.size, r.rate, r.variant,
                       r.f1.count, r.f1.mean, r.f1.std, r.f1.std_defined ? 1 : 0);
  }
}

}  // namespace segmix
