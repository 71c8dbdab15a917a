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

#include "segmix_cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "cli_support.h"
#include "segmix/augmented_io.h"
#include "segmix/corpus.h"
#include "segmix/embedding.h"
#include "segmix/errors.h"
#include "segmix/eval.h"
#include "segmix/experiment.h"
#include "segmix/mixer.h"
#include "segmix/model.h"
#include "segmix/pools.h"
#include "segmix/rng.h"
#include "segmix/synthetic.h"

namespace segmix::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Io {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> argv;
  std::map<std::string, std::string> config;
};

// ---------------------------------------------------------------------------
// Option blocks

struct AugmentOptions {
  std::string input;
  std::string task = "ner";
  std::string variant;
  std::string weights;
  double rate = 0.2;
  double alpha = 8.0;
  std::optional<double> lambda;
  std::string pad = "zero";
  bool normalize_tail = false;
  bool same_type = false;
  bool replace = false;
  bool repair_bio = false;
  std::string lexicon;
  std::string table;
  std::string table_out;
  std::size_t dim = 32;
  std::size_t threads = 1;
  std::size_t max_retries = 16;
  std::uint64_t seed = 0;
  std::string output;
  std::string manifest;
};

struct TrainOptions {
  std::string train;
  std::string task = "ner";
  std::string augmented;
  std::string table;
  std::string dev;
  std::size_t dim = 32;
  std::size_t window = 1;
  std::size_t epochs = 100;
  double lr = 0.1;
  std::size_t batch_size = 16;
  std::size_t patience = 10;
  bool no_early_stopping = false;
  bool repair_bio = false;
  std::uint64_t seed = 0;
  std::string output;
  std::string trace;
  std::string manifest;
};

struct EvalOptions {
  std::string checkpoint;
  std::string test;
  bool span_only = false;
  bool re_breakdown = false;
  bool repair = false;
  bool repair_bio = false;
  std::string json;
  std::string confusion;
  std::string manifest;
  std::uint64_t seed = 0;
};

struct SweepOptions {
  std::string train;
  std::string dev;
  std::string test;
  std::string sizes = "200";
  std::string rates = "0.2";
  std::string variants = "none,mention";
  std::string seeds = "1,2,3,4,5";
  std::size_t jobs = 1;
  std::size_t dim = 32;
  std::size_t window = 1;
  std::size_t epochs = 100;
  double lr = 0.1;
  std::size_t batch_size = 16;
  std::size_t patience = 10;
  double alpha = 8.0;
  std::optional<double> lambda;
  bool normalize_tail = false;
  bool no_early_stopping = false;
  std::string lexicon;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct BenchOptions {
  std::string input;
  std::size_t synthetic = 200;
  std::string sizes;
  std::string variant = "mention";
  double rate = 1.0;
  double alpha = 8.0;
  std::size_t repeats = 3;
  std::size_t epochs = 100;
  std::size_t dim = 32;
  std::size_t window = 1;
  double lr = 0.1;
  bool no_train = false;
  std::uint64_t seed = 0;
  std::string csv;
  std::string manifest;
};

struct RecoverOptions {
  std::string augmented;
  std::string table;
  std::size_t start = 0;
  std::size_t limit = 10;
};

struct SynthOptions {
  std::string task = "ner";
  std::size_t size = 1000;
  std::uint64_t seed = 0;
  std::string output;
  std::string lexicon_out;
  std::string manifest;
};

struct TableOptions {
  std::string corpus;
  std::string task = "ner";
  std::size_t dim = 32;
  std::size_t unk_buckets = 64;
  std::uint64_t seed = 0;
  std::string output;
  std::string manifest;
};

struct ReplayOptions {
  std::string manifest;
};

// ---------------------------------------------------------------------------
// Shared helpers

std::string or_default(const std::string& value, const std::string& fallback) {
  return value.empty() ? fallback : value;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

Manifest start_manifest(const std::string& command, const Io& io, std::uint64_t seed) {
  Manifest m(command, io.argv);
  m.set_config(io.config);
  m.set_seed("root", seed);
  return m;
}

std::vector<VariantWeight> checked_variants(const std::string& task, const std::string& spec,
                                            const std::string& weights) {
  const auto variants = parse_variants(spec, weights);
  for (const auto& vw : variants) {
    if (task == "ner" && vw.variant == Variant::kRelation) {
      throw UsageError("variant 'relation' conflicts with --task ner");
    }
    if (task == "re" && vw.variant != Variant::kRelation) {
      throw UsageError(fmt::format("variant '{}' conflicts with --task re", to_string(vw.variant)));
    }
  }
  return variants;
}

bool uses_synonyms(const std::vector<VariantWeight>& variants) {
  return std::any_of(variants.begin(), variants.end(),
                     [](const VariantWeight& v) { return v.variant == Variant::kSynonym; });
}

// Soft-label row as "LABEL", "[A/B]" for mixtures and "[A/-]" for padded
// rows whose weights fall short of one.
std::string annotate(const Eigen::Ref<const Vector>& row, const Vocabulary& vocab) {
  std::vector<std::pair<double, std::size_t>> parts;
  double total = 0.0;
  for (Eigen::Index c = 0; c < row.size(); ++c) {
    if (row(c) > 1e-9) {
      parts.emplace_back(row(c), static_cast<std::size_t>(c));
      total += row(c);
    }
  }
  if (parts.empty()) return "-";
  // Heavier component first; ties fall back to label order for stable output.
  std::sort(parts.begin(), parts.end(), [&](const auto& a, const auto& b) {
    if (std::abs(a.first - b.first) > 1e-9) return a.first > b.first;
    return vocab.at(a.second) < vocab.at(b.second);
  });
  if (parts.size() == 1 && std::abs(parts[0].first - 1.0) <= 1e-6) return vocab.at(parts[0].second);
  std::string out = "[";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "/" : "") + vocab.at(parts[i].second);
  if (total < 1.0 - 1e-6) out += "/-";
  return out + "]";
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

// ---------------------------------------------------------------------------
// augment

int cmd_augment(const AugmentOptions& o, Io& io) {
  const std::string spec = or_default(o.variant, o.task == "re" ? "relation" : "mention");
  MixConfig mc;
  mc.variants = checked_variants(o.task, spec, o.weights);
  if (uses_synonyms(mc.variants) && o.lexicon.empty()) {
    throw UsageError("the synonym variant needs --lexicon");
  }
  mc.alpha = o.alpha;
  mc.rate = o.rate;
  mc.fixed_lambda = o.lambda;
  mc.normalize_tail_labels = o.normalize_tail;
  mc.same_type_only = o.same_type;
  mc.max_retries = o.max_retries;
  mc.threads = o.threads;
  mc.seed = derive_seed(o.seed, "mix");
  mc.validate();

  Manifest manifest = start_manifest("augment", io, o.seed);
  manifest.set_seed("mix", mc.seed);
  manifest.add_input("corpus", o.input);
  const fs::path output = o.output;

  auto load_table = [&](const Vocabulary& tokens) {
    if (!o.table.empty()) {
      manifest.add_input("table", o.table);
      return read_table_file(o.table);
    }
    const std::uint64_t table_seed = derive_seed(o.seed, "table");
    manifest.set_seed("table", table_seed);
    EmbeddingTable table = EmbeddingTable::random(tokens, o.dim, table_seed);
    const std::string path = or_default(o.table_out, o.output + ".table");
    write_table_file(table, path);
    manifest.add_output("table", path);
    return table;
  };

  std::size_t produced = 0;
  std::size_t target = 0;
  std::size_t skipped = 0;
  double mixing = 0.0;
  if (o.task == "ner") {
    const TaggedCorpus corpus = read_conll_file(o.input, {.repair_bio = o.repair_bio});
    std::optional<SynonymLexicon> lexicon;
    if (!o.lexicon.empty()) {
      lexicon = read_lexicon_file(o.lexicon);
      manifest.add_input("lexicon", o.lexicon);
    }
    if (o.replace) {
      const auto t0 = Clock::now();
      const NerPools pools(corpus);
      const NerReplacement rep =
          replacement_da(corpus, pools.sources(lexicon ? &*lexicon : nullptr), mc);
      mixing = seconds_since(t0);
      auto out = open_output(output);
      write_conll(rep.as_corpus(true), out);
      produced = rep.sentences.size();
      target = rep.target;
      skipped = rep.skipped;
    } else {
      const EmbeddingTable table = load_table(corpus.token_vocab());
      const auto t0 = Clock::now();
      const NerPools pools(corpus);
      const NerGeneration gen =
          segmix_generate(corpus, pools.sources(lexicon ? &*lexicon : nullptr), table, mc);
      mixing = seconds_since(t0);
      auto out = open_output(output);
      write_augmented(out, corpus.label_vocab(), table.dim(), gen.examples);
      produced = gen.examples.size();
      target = gen.target;
      skipped = gen.skipped;
    }
  } else {
    const RECorpus corpus = read_re_file(o.input);
    if (o.replace) {
      const auto t0 = Clock::now();
      const SegmentPool pool = build_relation_pool(corpus);
      const REReplacement rep = replacement_da_re(corpus, pool, mc);
      mixing = seconds_since(t0);
      auto out = open_output(output);
      write_re(rep.corpus, out);
      produced = rep.corpus.size();
      target = rep.target;
      skipped = rep.skipped;
    } else {
      const EmbeddingTable table = load_table(corpus.token_vocab());
      const auto t0 = Clock::now();
      const SegmentPool pool = build_relation_pool(corpus);
      const REGeneration gen = segmix_generate_re(corpus, pool, table, mc);
      mixing = seconds_since(t0);
      auto out = open_output(output);
      write_augmented(out, corpus.relation_vocab(), table.dim(), gen.examples);
      produced = gen.examples.size();
      target = gen.target;
      skipped = gen.skipped;
    }
  }
  manifest.add_output(o.replace ? "corpus" : "augmented", output);
  manifest.set_timing("mixing_seconds", mixing);
  manifest.set_note("counts", {{"target", target}, {"produced", produced}, {"skipped", skipped}});
  manifest.write(or_default(o.manifest, o.output + ".manifest.json"));
  io.out << fmt::format("augment: {} {} (target {}, skipped {}) -> {} in {:.3f} s\n", produced,
                        o.replace ? "replaced examples" : "mixed examples", target, skipped,
                        o.output, mixing);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

// Labels of the augmented file, which must cover every label of the corpus.
Vocabulary merged_labels(const Vocabulary& corpus_labels, const Vocabulary& file_labels) {
  for (const auto& l : corpus_labels) {
    if (!file_labels.contains(l)) {
      throw DataError("label '" + l + "' of the training corpus is missing from the augmented file");
    }
  }
  return file_labels;
}

int cmd_train(const TrainOptions& o, Io& io) {
  if (!o.augmented.empty() && o.table.empty()) {
    throw UsageError("--augmented needs the --table it was built with");
  }
  Manifest manifest = start_manifest("train", io, o.seed);
  manifest.add_input("train", o.train);
  TrainConfig tc;
  tc.epochs = o.epochs;
  tc.learning_rate = o.lr;
  tc.batch_size = o.batch_size;
  tc.patience = o.patience;
  tc.seed = derive_seed(o.seed, "train");
  tc.validate();
  manifest.set_seed("train", tc.seed);

  auto make_table = [&](const Vocabulary& tokens) {
    if (!o.table.empty()) {
      manifest.add_input("table", o.table);
      return read_table_file(o.table);
    }
    const std::uint64_t s = derive_seed(o.seed, "table");
    manifest.set_seed("table", s);
    return EmbeddingTable::random(tokens, o.dim, s);
  };
  auto check_dim = [](std::size_t file_dim, const EmbeddingTable& table) {
    if (file_dim != table.dim()) {
      throw DataError(fmt::format("augmented file dim {} differs from table dim {}", file_dim, table.dim()));
    }
  };

  const bool stop_early = !o.dev.empty() && !o.no_early_stopping;
  TrainResult result;
  std::optional<Checkpoint> checkpoint;
  const auto t0 = Clock::now();
  if (o.task == "ner") {
    const TaggedCorpus corpus = read_conll_file(o.train, {.repair_bio = o.repair_bio});
    const EmbeddingTable table = make_table(corpus.token_vocab());
    Vocabulary labels = corpus.label_vocab();
    std::vector<MixedExample> mixed;
    if (!o.augmented.empty()) {
      std::ifstream in(o.augmented, std::ios::binary);
      if (!in) throw DataError("cannot open " + o.augmented);
      AugmentedNerFile file = read_augmented_ner(in);
      check_dim(file.dim, table);
      labels = merged_labels(labels, file.label_vocab);
      mixed = std::move(file.examples);
      manifest.add_input("augmented", o.augmented);
    }
    std::vector<TaggerExample> data;
    for (const auto& s : corpus.sentences()) data.push_back(make_tagger_example(s, table, labels));
    for (const auto& m : mixed) data.push_back(make_tagger_example(m));
    TaggerModel model(table.dim(), o.window, labels.size());
    TaggerValidator validator;
    std::optional<TaggedCorpus> dev;
    if (stop_early) {
      dev = read_conll_file(o.dev, {.repair_bio = o.repair_bio});
      manifest.add_input("dev", o.dev);
      validator = [&](const TaggerModel& m) {
        return entity_f1(*dev, predict_tags(m, table, labels, *dev)).f1;
      };
    }
    result = train(model, data, tc, validator);
    checkpoint = Checkpoint{model, labels, table};
  } else {
    const RECorpus corpus = read_re_file(o.train);
    const EmbeddingTable table = make_table(corpus.token_vocab());
    Vocabulary labels = corpus.relation_vocab();
    std::vector<MixedRESample> mixed;
    if (!o.augmented.empty()) {
      std::ifstream in(o.augmented, std::ios::binary);
      if (!in) throw DataError("cannot open " + o.augmented);
      AugmentedREFile file = read_augmented_re(in);
      check_dim(file.dim, table);
      labels = merged_labels(labels, file.relation_vocab);
      mixed = std::move(file.examples);
      manifest.add_input("augmented", o.augmented);
    }
    std::vector<REExample> data;
    for (const auto& s : corpus.samples()) data.push_back(make_re_example(s, table, labels));
    for (const auto& m : mixed) data.push_back(make_re_example(m));
    REModel model(table.dim(), labels.size());
    REValidator validator;
    std::optional<RECorpus> dev;
    if (stop_early) {
      dev = read_re_file(o.dev);
      manifest.add_input("dev", o.dev);
      validator = [&](const REModel& m) {
        return re_accuracy(*dev, predict_relations(m, table, labels, *dev), &labels).full;
      };
    }
    result = train(model, data, tc, validator);
    checkpoint = Checkpoint{model, labels, table};
  }
  const double training = seconds_since(t0);
  save_checkpoint_file(*checkpoint, o.output);
  manifest.add_output("checkpoint", o.output);
  if (!o.trace.empty()) {
    auto out = open_output(o.trace);
    write_loss_trace_csv(result, out);
    out.close();
    manifest.add_output("trace", o.trace);
  }
  manifest.set_timing("training_seconds", training);
  manifest.write(or_default(o.manifest, o.output + ".manifest.json"));
  const double final_loss = result.trace.empty() ? 0.0 : result.trace.back().train_loss;
  io.out << fmt::format("train: {} epochs, final loss {:.6f}", result.trace.size(), final_loss);
  if (result.best_score) {
    io.out << fmt::format(", best dev score {:.4f} at epoch {}", *result.best_score, result.best_epoch);
  }
  io.out << fmt::format(" -> {} in {:.3f} s\n", o.output, training);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const EvalOptions& o, Io& io) {
  const Checkpoint ck = load_checkpoint_file(o.checkpoint);
  std::optional<Manifest> manifest;
  if (!o.manifest.empty()) {
    manifest = start_manifest("eval", io, o.seed);
    manifest->add_input("checkpoint", o.checkpoint);
    manifest->add_input("test", o.test);
  }
  std::string json;
  if (ck.is_tagger()) {
    const auto& model = std::get<TaggerModel>(ck.model);
    if (model.dim() != ck.table.dim()) {
      throw DataError(fmt::format("checkpoint model dim {} differs from its table dim {}", model.dim(),
                                  ck.table.dim()));
    }
    const TaggedCorpus gold = read_conll_file(o.test, {.repair_bio = o.repair_bio});
    for (const auto& l : gold.label_vocab()) {
      if (!ck.labels.contains(l)) {
        throw DataError("test label '" + l + "' is not in the checkpoint label vocabulary");
      }
    }
    std::vector<std::vector<BioLabel>> pred;
    for (const auto& s : gold.sentences()) {
      pred.push_back(decode_labels(model.forward(ck.table.embed(s.tokens)), ck.labels, o.repair));
    }
    const EvalReport report = o.span_only ? span_only_f1(gold, pred) : entity_f1(gold, pred);
    io.out << report.to_table();
    json = report.to_json();
    if (!o.confusion.empty()) {
      auto out = open_output(o.confusion);
      write_confusion_csv(report.confusion, out);
      out.close();
      if (manifest) manifest->add_output("confusion", o.confusion);
    }
  } else {
    const auto& model = std::get<REModel>(ck.model);
    if (model.dim() != ck.table.dim()) {
      throw DataError(fmt::format("checkpoint model dim {} differs from its table dim {}", model.dim(),
                                  ck.table.dim()));
    }
    const RECorpus gold = read_re_file(o.test);
    for (const auto& l : gold.relation_vocab()) {
      if (!ck.labels.contains(l)) {
        throw DataError("test relation '" + l + "' is not in the checkpoint label vocabulary");
      }
    }
    const auto pred = predict_relations(model, ck.table, ck.labels, gold);
    const REAccuracy acc = re_accuracy(gold, pred, &ck.labels);
    io.out << fmt::format("accuracy {:.4f} ({}/{})\n", acc.full, acc.full_hits, acc.total);
    if (o.re_breakdown) {
      io.out << fmt::format("type-only accuracy {:.4f} ({}/{})\n", acc.type_only, acc.type_hits, acc.total);
      io.out << fmt::format("direction-only accuracy {:.4f} ({}/{})\n", acc.direction_only,
                            acc.direction_hits, acc.total);
    }
    json = acc.to_json();
  }
  if (!o.json.empty()) {
    write_text_file(o.json, json + "\n");
    if (manifest) manifest->add_output("report", o.json);
  }
  if (manifest) manifest->write(o.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const SweepOptions& o, Io& io) {
  SweepConfig cfg;
  cfg.sizes = parse_sizes(o.sizes);
  cfg.rates = parse_doubles(o.rates);
  cfg.variants = split_list(o.variants);
  for (const auto& v : cfg.variants) {
    if (v != "none") checked_variants("ner", v, "");
  }
  const auto user_seeds = parse_seeds(o.seeds);
  cfg.jobs = o.jobs;
  cfg.base.dim = o.dim;
  cfg.base.window = o.window;
  cfg.base.alpha = o.alpha;
  cfg.base.fixed_lambda = o.lambda;
  cfg.base.normalize_tail_labels = o.normalize_tail;
  cfg.base.early_stopping = !o.no_early_stopping;
  cfg.base.train.epochs = o.epochs;
  cfg.base.train.learning_rate = o.lr;
  cfg.base.train.batch_size = o.batch_size;
  cfg.base.train.patience = o.patience;
  cfg.base.train.validate();
  cfg.seeds = user_seeds;
  if (o.seed != 0) {
    for (auto& s : cfg.seeds) s = derive_seed(o.seed, "run", s);
  }

  const TaggedCorpus train_pool = read_conll_file(o.train);
  const TaggedCorpus dev = read_conll_file(o.dev);
  const TaggedCorpus test = read_conll_file(o.test);
  std::optional<SynonymLexicon> lexicon;
  if (!o.lexicon.empty()) lexicon = read_lexicon_file(o.lexicon);

  fs::create_directories(o.out_dir);
  Manifest manifest = start_manifest("sweep", io, o.seed);
  manifest.add_input("train", o.train);
  manifest.add_input("dev", o.dev);
  manifest.add_input("test", o.test);
  if (lexicon) manifest.add_input("lexicon", o.lexicon);
  manifest.set_note("run_seeds", cfg.seeds);

  const auto t0 = Clock::now();
  SweepOutcome outcome = run_sweep(train_pool, dev, test, cfg, lexicon ? &*lexicon : nullptr);
  const double elapsed = seconds_since(t0);
  // Rows report the seeds as given.
  for (auto& row : outcome.rows) {
    const auto it = std::find(cfg.seeds.begin(), cfg.seeds.end(), row.seed);
    row.seed = user_seeds[static_cast<std::size_t>(it - cfg.seeds.begin())];
  }
  const auto aggregate = aggregate_sweep(outcome.rows);

  const fs::path raw = fs::path(o.out_dir) / "sweep_raw.csv";
  const fs::path summary = fs::path(o.out_dir) / "sweep_summary.csv";
  {
    auto out = open_output(raw);
    write_sweep_csv(outcome.rows, out);
  }
  {
    auto out = open_output(summary);
    write_aggregate_csv(aggregate, out);
  }
  manifest.add_output("raw", raw);
  manifest.add_output("summary", summary);
  manifest.set_timing("total_seconds", elapsed);
  if (outcome.error) manifest.set_note("error", *outcome.error);
  manifest.write(fs::path(o.out_dir) / "manifest.json");

  io.out << fmt::format("{:>6} {:>6} {:<20} {:>4} {:>8} {:>8}\n", "size", "rate", "variant", "runs",
                        "f1_mean", "f1_std");
  for (const auto& a : aggregate) {
    io.out << fmt::format("{:>6} {:>6.2f} {:<20} {:>4} {:>8.4f} {:>8}\n", a.size, a.rate, a.variant,
                          a.f1.count, a.f1.mean,
                          a.f1.std_defined ? fmt::format("{:.4f}", a.f1.std) : "n/a");
  }
  if (outcome.error) {
    io.err << "sweep aborted: " << *outcome.error << "\n"
           << "partial results kept in " << o.out_dir << "\n";
    return kExitData;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const BenchOptions& o, Io& io) {
  if (o.repeats == 0) throw UsageError("--repeats must be positive");
  MixConfig mc;
  mc.variants = checked_variants("ner", o.variant, "");
  if (uses_synonyms(mc.variants)) throw UsageError("bench does not take a lexicon; pick another variant");
  mc.rate = o.rate;
  mc.alpha = o.alpha;
  mc.validate();

  std::optional<Manifest> manifest;
  const bool record = !o.csv.empty() || !o.manifest.empty();
  if (record) manifest = start_manifest("bench", io, o.seed);
  TaggedCorpus corpus;
  if (!o.input.empty()) {
    corpus = read_conll_file(o.input);
    if (manifest) manifest->add_input("corpus", o.input);
  } else {
    corpus = synthesize_ner_corpus(o.synthetic, derive_seed(o.seed, "corpus"));
  }
  std::vector<std::size_t> sizes = o.sizes.empty() ? std::vector<std::size_t>{corpus.size()}
                                                    : parse_sizes(o.sizes);
  for (auto s : sizes) {
    if (s > corpus.size()) {
      throw UsageError(fmt::format("size {} exceeds the corpus ({} sentences)", s, corpus.size()));
    }
  }

  struct Row {
    std::size_t size;
    Summary mixing;
    Summary training;
    std::size_t mixed;
  };
  std::vector<Row> rows;
  for (std::size_t size : sizes) {
    const TaggedCorpus data =
        size == corpus.size() ? corpus : downsample(corpus, size, derive_seed(o.seed, "subset", size));
    const EmbeddingTable table =
        EmbeddingTable::random(data.token_vocab(), o.dim, derive_seed(o.seed, "table", size));
    std::vector<double> mix_times;
    std::vector<double> train_times;
    std::size_t mixed = 0;
    for (std::size_t r = 0; r < o.repeats; ++r) {
      mc.seed = derive_seed(o.seed, "mix", r);
      const auto t0 = Clock::now();
      const NerPools pools(data);
      const NerGeneration gen = segmix_generate(data, pools.sources(), table, mc);
      mix_times.push_back(seconds_since(t0));
      mixed = gen.examples.size();
      if (o.no_train) continue;
      std::vector<TaggerExample> examples;
      for (const auto& s : data.sentences()) examples.push_back(make_tagger_example(s, table, data.label_vocab()));
      for (const auto& m : gen.examples) examples.push_back(make_tagger_example(m));
      TaggerModel model(o.dim, o.window, data.label_vocab().size());
      TrainConfig tc;
      tc.epochs = o.epochs;
      tc.learning_rate = o.lr;
      tc.seed = derive_seed(o.seed, "train", r);
      const auto t1 = Clock::now();
      train(model, examples, tc);
      train_times.push_back(seconds_since(t1));
    }
    rows.push_back({size, summarize(mix_times), summarize(train_times), mixed});
  }

  auto cell = [](const Summary& s) {
    if (s.count == 0) return std::string("-");
    return fmt::format("{:.4f} ± {:.4f}{}", s.mean, s.std, s.std_defined ? "" : "*");
  };
  io.out << fmt::format("{:>6} {:>7} {:>8} {:>22} {:>22}\n", "size", "mixed", "repeats", "mixing_s",
                        "training_s");
  for (const auto& r : rows) {
    io.out << fmt::format("{:>6} {:>7} {:>8} {:>22} {:>22}\n", r.size, r.mixed, o.repeats, cell(r.mixing),
                          cell(r.training));
  }
  if (o.repeats == 1) io.out << "* standard deviation undefined for a single repeat; shown as 0\n";

  if (!o.csv.empty()) {
    std::string text = "size,mixed,repeats,mixing_mean,mixing_std,training_mean,training_std,std_defined\n";
    for (const auto& r : rows) {
      text += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", r.size, r.mixed, o.repeats,
                          r.mixing.mean, r.mixing.std, r.training.mean, r.training.std,
                          r.mixing.std_defined ? 1 : 0);
    }
    write_text_file(o.csv, text);
    manifest->add_output("csv", o.csv);
  }
  if (manifest) {
    for (const auto& r : rows) {
      manifest->set_timing(fmt::format("mixing_seconds_{}", r.size), r.mixing.mean);
      manifest->set_timing(fmt::format("training_seconds_{}", r.size), r.training.mean);
    }
    manifest->write(or_default(o.manifest, o.csv + ".manifest.json"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// recover

int cmd_recover(const RecoverOptions& o, Io& io) {
  const EmbeddingTable table = read_table_file(o.table);
  const std::string task = peek_augmented_task(o.augmented);
  std::ifstream in(o.augmented, std::ios::binary);
  if (!in) throw DataError("cannot open " + o.augmented);
  auto check_dim = [&](std::size_t dim) {
    if (dim != table.dim()) {
      throw DataError(fmt::format("table dim {} differs from augmented file dim {}", table.dim(), dim));
    }
  };
  auto tokens_of = [&](const Matrix& emb) {
    std::vector<std::string> out;
    for (Eigen::Index r = 0; r < emb.rows(); ++r) out.push_back(nearest_token(table, emb.row(r).transpose()));
    return out;
  };
  auto header = [&](std::size_t i, const Provenance& p) {
    io.out << fmt::format("# example {} source {} variant {} lambda {:.4f}\n", i, p.source_index,
                          to_string(p.variant), p.lambda);
  };
  const std::size_t stop = o.limit == 0 ? std::numeric_limits<std::size_t>::max() : o.start + o.limit;
  if (task == "ner") {
    const AugmentedNerFile file = read_augmented_ner(in);
    check_dim(file.dim);
    for (std::size_t i = o.start; i < file.examples.size() && i < stop; ++i) {
      const auto& ex = file.examples[i];
      header(i, ex.provenance);
      std::vector<std::string> labels;
      for (Eigen::Index r = 0; r < ex.soft_labels.rows(); ++r) {
        labels.push_back(annotate(ex.soft_labels.row(r).transpose(), file.label_vocab));
      }
      io.out << join(tokens_of(ex.embeddings), " ") << "\n" << join(labels, " ") << "\n\n";
    }
  } else {
    const AugmentedREFile file = read_augmented_re(in);
    check_dim(file.dim);
    for (std::size_t i = o.start; i < file.examples.size() && i < stop; ++i) {
      const auto& ex = file.examples[i];
      header(i, ex.provenance);
      io.out << join(tokens_of(ex.embeddings), " ") << "\n"
             << fmt::format("e1 [{}, {}) e2 [{}, {}) relation {}\n\n", ex.e1.start, ex.e1.end, ex.e2.start,
                            ex.e2.end, annotate(ex.relation_label, file.relation_vocab));
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth, table

int cmd_synth(const SynthOptions& o, Io& io) {
  Manifest manifest = start_manifest("synth", io, o.seed);
  {
    auto out = open_output(o.output);
    if (o.task == "ner") {
      write_conll(synthesize_ner_corpus(o.size, o.seed), out);
    } else {
      write_re(synthesize_re_corpus(o.size, o.seed), out);
    }
  }
  manifest.add_output("corpus", o.output);
  if (!o.lexicon_out.empty()) {
    std::string text;
    const SynonymLexicon lexicon = synthesize_lexicon();
    for (const auto& [token, synonyms] : lexicon.entries()) {
      text += token + "\t" + join(synonyms, ",") + "\n";
    }
    write_text_file(o.lexicon_out, text);
    manifest.add_output("lexicon", o.lexicon_out);
  }
  manifest.write(or_default(o.manifest, o.output + ".manifest.json"));
  io.out << fmt::format("synth: {} {} -> {}\n", o.size, o.task == "ner" ? "sentences" : "samples", o.output);
  return kExitOk;
}

int cmd_table(const TableOptions& o, Io& io) {
  Manifest manifest = start_manifest("table", io, o.seed);
  manifest.add_input("corpus", o.corpus);
  const Vocabulary tokens =
      o.task == "ner" ? read_conll_file(o.corpus).token_vocab() : read_re_file(o.corpus).token_vocab();
  const EmbeddingTable table = EmbeddingTable::random(tokens, o.dim, o.seed, o.unk_buckets);
  write_table_file(table, o.output);
  manifest.add_output("table", o.output);
  manifest.write(or_default(o.manifest, o.output + ".manifest.json"));
  io.out << fmt::format("table: {} tokens x {} dims -> {}\n", table.vocab_size(), table.dim(), o.output);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// replay

int cmd_replay(const ReplayOptions& o, Io& io) {
  const nlohmann::json doc = read_manifest(o.manifest);
  const auto argv = doc.at("argv").get<std::vector<std::string>>();
  if (argv.empty() || argv.front() == "replay") throw DataError("manifest holds no replayable command");
  const auto recorded = doc.at("outputs");
  const int code = run_cli(argv, io.out, io.err);
  if (code != kExitOk) return code;
  bool identical = true;
  for (const auto& [role, entry] : recorded.items()) {
    const std::string path = entry.at("path").get<std::string>();
    const bool same = sha256_file(path) == entry.at("sha256").get<std::string>();
    identical = identical && same;
    io.out << fmt::format("replay: {} {} {}\n", role, path, same ? "identical" : "DIFFERS");
  }
  return identical ? kExitOk : kExitData;
}

// ---------------------------------------------------------------------------
// Assembly

bool is_flag(const CLI::Option* opt) { return opt->get_expected_max() == 0; }

// Appends config-file values for options not given on the command line and
// drops --config itself, so the returned argv replays without the file.
std::vector<std::string> apply_config(std::vector<std::string> args, CLI::App& sub,
                                      std::map<std::string, std::string>* used) {
  std::string config_path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (config_path.empty()) return kept;
  const auto config = read_config_file(config_path);
  for (const auto& [key, value] : config) {
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("unknown key '" + key + "' in " + config_path);
    const bool given = std::any_of(kept.begin(), kept.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
    if (given) continue;
    if (is_flag(opt)) {
      if (value == "true" || value == "1" || value == "yes") {
        kept.push_back("--" + key);
      } else if (value != "false" && value != "0" && value != "no") {
        throw UsageError("flag '" + key + "' in " + config_path + " needs true or false");
      }
    } else {
      kept.push_back("--" + key);
      kept.push_back(value);
    }
    (*used)[key] = value;
  }
  return kept;
}

std::map<std::string, std::string> snapshot(const CLI::App& sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (is_flag(opt)) {
      out[name] = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      out[name] = join(opt->results(), ",");
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SegMix data augmentation for sequence labeling and relation extraction", "segmix"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  AugmentOptions aug;
  TrainOptions tr;
  EvalOptions ev;
  SweepOptions sw;
  BenchOptions be;
  RecoverOptions rc;
  SynthOptions sy;
  TableOptions tb;
  ReplayOptions rp;
  const std::vector<std::string> tasks = {"ner", "re"};

  auto add_config = [](CLI::App* sub) {
    sub->add_option("--config", "Flat key = value file; command-line flags take precedence");
  };

  auto* a = app.add_subcommand("augment", "Generate mixed (or replaced) examples from a corpus");
  a->add_option("--input", aug.input, "Training corpus (CoNLL or relation TSV)")->required();
  a->add_option("--task", aug.task)->check(CLI::IsMember(tasks));
  a->add_option("--variant", aug.variant, "mention, token, synonym, whole_sequence, relation; join with +");
  a->add_option("--weights", aug.weights, "Budget weights for combined variants, e.g. 0.7,0.3");
  a->add_option("--rate", aug.rate);
  a->add_option("--alpha", aug.alpha);
  a->add_option("--lambda", aug.lambda, "Fixed mixing coefficient (the Beta draw still happens)");
  a->add_option("--pad", aug.pad)->check(CLI::IsMember({"zero"}));
  a->add_flag("--normalize-tail", aug.normalize_tail);
  a->add_flag("--same-type", aug.same_type);
  a->add_flag("--replace", aug.replace, "Write verbatim substitutions as a corpus instead of mixing");
  a->add_flag("--repair-bio", aug.repair_bio);
  a->add_option("--lexicon", aug.lexicon);
  a->add_option("--table", aug.table, "Embedding table; a random one is created when absent");
  a->add_option("--table-out", aug.table_out, "Where a created table goes (default: <output>.table)");
  a->add_option("--dim", aug.dim);
  a->add_option("--threads", aug.threads);
  a->add_option("--max-retries", aug.max_retries);
  a->add_option("--seed", aug.seed);
  a->add_option("--output", aug.output)->required();
  a->add_option("--manifest", aug.manifest);
  add_config(a);

  auto* t = app.add_subcommand("train", "Train a tagger or relation classifier");
  t->add_option("--train", tr.train)->required();
  t->add_option("--task", tr.task)->check(CLI::IsMember(tasks));
  t->add_option("--augmented", tr.augmented);
  t->add_option("--table", tr.table);
  t->add_option("--dev", tr.dev, "Validation corpus for early stopping");
  t->add_option("--dim", tr.dim);
  t->add_option("--window", tr.window);
  t->add_option("--epochs", tr.epochs);
  t->add_option("--lr", tr.lr);
  t->add_option("--batch-size", tr.batch_size);
  t->add_option("--patience", tr.patience);
  t->add_flag("--no-early-stopping", tr.no_early_stopping);
  t->add_flag("--repair-bio", tr.repair_bio);
  t->add_option("--seed", tr.seed);
  t->add_option("--output", tr.output, "Checkpoint path")->required();
  t->add_option("--trace", tr.trace, "Per-epoch loss CSV");
  t->add_option("--manifest", tr.manifest);
  add_config(t);

  auto* e = app.add_subcommand("eval", "Score a checkpoint on a test corpus");
  e->add_option("--checkpoint", ev.checkpoint)->required();
  e->add_option("--test", ev.test)->required();
  e->add_flag("--span-only", ev.span_only, "Ignore entity types");
  e->add_flag("--re-breakdown", ev.re_breakdown, "Also report type-only and direction-only accuracy");
  e->add_flag("--repair", ev.repair, "Promote orphan I- predictions to B-");
  e->add_flag("--repair-bio", ev.repair_bio);
  e->add_option("--json", ev.json);
  e->add_option("--confusion", ev.confusion);
  e->add_option("--manifest", ev.manifest);
  e->add_option("--seed", ev.seed);
  add_config(e);

  auto* s = app.add_subcommand("sweep", "Grid of sizes x rates x variants x seeds");
  s->add_option("--train", sw.train, "Pool to downsample training sets from")->required();
  s->add_option("--dev", sw.dev)->required();
  s->add_option("--test", sw.test)->required();
  s->add_option("--sizes", sw.sizes);
  s->add_option("--rates", sw.rates);
  s->add_option("--variants", sw.variants, "Comma list; 'none' is the baseline");
  s->add_option("--seeds", sw.seeds);
  s->add_option("--jobs", sw.jobs);
  s->add_option("--dim", sw.dim);
  s->add_option("--window", sw.window);
  s->add_option("--epochs", sw.epochs);
  s->add_option("--lr", sw.lr);
  s->add_option("--batch-size", sw.batch_size);
  s->add_option("--patience", sw.patience);
  s->add_option("--alpha", sw.alpha);
  s->add_option("--lambda", sw.lambda);
  s->add_flag("--normalize-tail", sw.normalize_tail);
  s->add_flag("--no-early-stopping", sw.no_early_stopping);
  s->add_option("--lexicon", sw.lexicon);
  s->add_option("--seed", sw.seed, "Root seed; 0 uses the run seeds as given");
  s->add_option("--out", sw.out_dir, "Output directory")->required();
  add_config(s);

  auto* b = app.add_subcommand("bench", "Time mixing and training");
  b->add_option("--input", be.input);
  b->add_option("--synthetic", be.synthetic, "Synthetic corpus size when --input is absent");
  b->add_option("--sizes", be.sizes, "Comma list of subset sizes");
  b->add_option("--variant", be.variant);
  b->add_option("--rate", be.rate);
  b->add_option("--alpha", be.alpha);
  b->add_option("--repeats", be.repeats);
  b->add_option("--epochs", be.epochs);
  b->add_option("--dim", be.dim);
  b->add_option("--window", be.window);
  b->add_option("--lr", be.lr);
  b->add_flag("--no-train", be.no_train);
  b->add_option("--seed", be.seed);
  b->add_option("--csv", be.csv);
  b->add_option("--manifest", be.manifest);
  add_config(b);

  auto* r = app.add_subcommand("recover", "Render mixed examples through nearest tokens");
  r->add_option("--augmented", rc.augmented)->required();
  r->add_option("--table", rc.table)->required();
  r->add_option("--start", rc.start);
  r->add_option("--limit", rc.limit, "0 prints everything");
  add_config(r);

  auto* y = app.add_subcommand("synth", "Write a synthetic template corpus");
  y->add_option("--task", sy.task)->check(CLI::IsMember(tasks));
  y->add_option("--size", sy.size);
  y->add_option("--seed", sy.seed);
  y->add_option("--output", sy.output)->required();
  y->add_option("--lexicon-out", sy.lexicon_out);
  y->add_option("--manifest", sy.manifest);
  add_config(y);

  auto* k = app.add_subcommand("table", "Create a random embedding table for a corpus");
  k->add_option("--corpus", tb.corpus)->required();
  k->add_option("--task", tb.task)->check(CLI::IsMember(tasks));
  k->add_option("--dim", tb.dim);
  k->add_option("--unk-buckets", tb.unk_buckets);
  k->add_option("--seed", tb.seed);
  k->add_option("--output", tb.output)->required();
  k->add_option("--manifest", tb.manifest);
  add_config(k);

  auto* p = app.add_subcommand("replay", "Re-run a manifest and compare output hashes");
  p->add_option("manifest", rp.manifest)->required();

  Io io{out, err, {}, {}};
  try {
    std::vector<std::string> effective = args;
    if (!args.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(args.front())) {
        std::vector<std::string> rest(args.begin() + 1, args.end());
        std::map<std::string, std::string> used;
        rest = apply_config(rest, *sub, &used);
        effective = {args.front()};
        effective.insert(effective.end(), rest.begin(), rest.end());
      }
    }
    std::vector<std::string> reversed(effective.rbegin(), effective.rend());
    app.parse(reversed);
    io.argv = effective;
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const DataError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitData;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) io.config = snapshot(*sub);
    if (a->parsed()) return cmd_augment(aug, io);
    if (t->parsed()) return cmd_train(tr, io);
    if (e->parsed()) return cmd_eval(ev, io);
    if (s->parsed()) return cmd_sweep(sw, io);
    if (b->parsed()) return cmd_bench(be, io);
    if (r->parsed()) return cmd_recover(rc, io);
    if (y->parsed()) return cmd_synth(sy, io);
    if (k->parsed()) return cmd_table(tb, io);
    if (p->parsed()) return cmd_replay(rp, io);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace segmix::cli
