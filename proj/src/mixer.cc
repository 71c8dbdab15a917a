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

#include "segmix/mixer.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace segmix {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos
                                         ? std::string_view::npos
                                         : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

// Splices `blocks` over `spans` of `base`; spans may come in any order but
// must not overlap. Output coordinates of each block land in `out_spans`.
Matrix splice_rows(const Matrix& base, const std::vector<NominalSpan>& spans,
                   const std::vector<Matrix>& blocks,
                   std::vector<NominalSpan>& out_spans) {
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spans[a].start < spans[b].start;
  });
  Eigen::Index rows = base.rows();
  for (std::size_t k = 0; k < spans.size(); ++k) {
    rows += blocks[k].rows() - static_cast<Eigen::Index>(spans[k].size());
  }
  Matrix out(rows, base.cols());
  out_spans.assign(spans.size(), {});
  Eigen::Index in_pos = 0;
  Eigen::Index out_pos = 0;
  for (std::size_t k : order) {
    const auto start = static_cast<Eigen::Index>(spans[k].start);
    const Eigen::Index gap = start - in_pos;
    out.middleRows(out_pos, gap) = base.middleRows(in_pos, gap);
    out_pos += gap;
    out.middleRows(out_pos, blocks[k].rows()) = blocks[k];
    out_spans[k] = {static_cast<std::size_t>(out_pos),
                    static_cast<std::size_t>(out_pos + blocks[k].rows())};
    out_pos += blocks[k].rows();
    in_pos = static_cast<Eigen::Index>(spans[k].end);
  }
  const Eigen::Index tail = base.rows() - in_pos;
  out.middleRows(out_pos, tail) = base.middleRows(in_pos, tail);
  return out;
}

template <typename T>
std::vector<T> splice_seq(const std::vector<T>& base,
                          const std::vector<NominalSpan>& spans,
                          const std::vector<std::vector<T>>& blocks,
                          std::vector<NominalSpan>& out_spans) {
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spans[a].start < spans[b].start;
  });
  std::vector<T> out;
  out_spans.assign(spans.size(), {});
  std::size_t in_pos = 0;
  for (std::size_t k : order) {
    out.insert(out.end(), base.begin() + static_cast<std::ptrdiff_t>(in_pos),
               base.begin() + static_cast<std::ptrdiff_t>(spans[k].start));
    out_spans[k].start = out.size();
    out.insert(out.end(), blocks[k].begin(), blocks[k].end());
    out_spans[k].end = out.size();
    in_pos = spans[k].end;
  }
  out.insert(out.end(), base.begin() + static_cast<std::ptrdiff_t>(in_pos),
             base.end());
  return out;
}

// Rows of a padded block that receive positive weight from either side. At
// lambda = 1 the partner contributes nothing and the block keeps the source
// length; at lambda = 0 it takes the partner length.
Eigen::Index weighted_rows(std::size_t source_rows, Eigen::Index partner_rows,
                           double lambda) {
  const auto a = static_cast<Eigen::Index>(source_rows);
  if (lambda == 1.0) return a;
  if (lambda == 0.0) return partner_rows;
  return std::max(a, partner_rows);
}

Matrix rows_of(const Matrix& m, const NominalSpan& span) {
  return m.middleRows(static_cast<Eigen::Index>(span.start),
                      static_cast<Eigen::Index>(span.size()));
}

// Pool entry for the segment at `span`, optionally restricted to entries of
// the same entity type.
std::optional<std::size_t> draw_partner(const SegmentPool& pool,
                                        const Sentence& sentence,
                                        const NominalSpan& span,
                                        bool same_type, Rng& rng) {
  if (!same_type) return draw_tuple_index(pool, rng);
  const std::string& type = sentence.labels[span.start].type;
  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& labels = pool[i].labels.front();
    if (!labels.empty() && labels.front().type == type) matching.push_back(i);
  }
  if (matching.empty()) return std::nullopt;
  return matching[rng.index(matching.size())];
}

const SegmentPool& require_pool(const SegmentPool* pool) {
  if (pool == nullptr || pool->empty()) throw EmptyPoolError();
  return *pool;
}

void check_sources(const MixSources& sources, Variant variant) {
  switch (variant) {
    case Variant::kMention:
      require_pool(sources.mentions);
      break;
    case Variant::kToken:
      require_pool(sources.tokens);
      break;
    case Variant::kWholeSequence:
      require_pool(sources.sentences);
      break;
    case Variant::kSynonym:
      if (sources.lexicon == nullptr) throw DataError("synonym variant needs a lexicon");
      if (sources.lexicon->empty()) throw DataError("synonym lexicon is empty");
      break;
    case Variant::kRelation:
      throw std::invalid_argument("relation variant applies to RE corpora only");
  }
}

struct Slot {
  std::size_t candidate = 0;
  Variant variant = Variant::kMention;
};

// Candidate set D_S plus the variant of each slot. Budgets of combined
// variants use largest remainders so they sum to the total.
std::vector<Slot> schedule_slots(std::size_t n, const MixConfig& config) {
  const std::size_t target = augmentation_budget(n, config.rate);
  std::vector<Slot> slots(target);
  if (target == 0) return slots;
  if (n == 0) throw std::invalid_argument("cannot augment an empty corpus");

  Rng rng(config.seed, "candidates");
  if (config.rate > 1.0) {
    for (auto& s : slots) s.candidate = rng.index(n);
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < target; ++i) {
      std::swap(order[i], order[i + rng.index(n - i)]);
      slots[i].candidate = order[i];
    }
  }

  const auto& vw = config.variants;
  std::vector<std::size_t> counts(vw.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < vw.size(); ++k) {
    const double share = vw[k].weight * static_cast<double>(target);
    counts[k] = static_cast<std::size_t>(std::floor(share));
    assigned += counts[k];
    remainders.emplace_back(share - std::floor(share), k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < target; ++i, ++assigned) {
    ++counts[remainders[i % remainders.size()].second];
  }
  std::size_t j = 0;
  for (std::size_t k = 0; k < vw.size(); ++k) {
    for (std::size_t c = 0; c < counts[k]; ++c) slots[j++].variant = vw[k].variant;
  }
  return slots;
}

// Runs fn(slot_index) for every slot, possibly on several threads. Results
// are stored by slot index, so scheduling never changes the output.
template <typename Result, typename Fn>
std::vector<Result> run_slots(std::size_t count, std::size_t threads, Fn fn) {
  std::vector<Result> results(count);
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t j = 0; j < count; ++j) results[j] = fn(j);
    return results;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t j = w; j < count; j += threads) results[j] = fn(j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<std::optional<MixPlan>> plan_corpus(const TaggedCorpus& corpus,
                                                const MixSources& sources,
                                                const MixConfig& config,
                                                std::size_t& target) {
  config.validate();
  const auto slots = schedule_slots(corpus.size(), config);
  target = slots.size();
  if (slots.empty()) return {};
  for (const auto& vw : config.variants) {
    if (vw.weight > 0.0) check_sources(sources, vw.variant);
  }
  return run_slots<std::optional<MixPlan>>(
      slots.size(), config.threads, [&](std::size_t j) -> std::optional<MixPlan> {
        Rng rng(config.seed, "slot", j);
        for (std::size_t attempt = 0; attempt <= config.max_retries; ++attempt) {
          const std::size_t cand =
              attempt == 0 ? slots[j].candidate : rng.index(corpus.size());
          auto plan = plan_mix(corpus[cand], cand, slots[j].variant, sources,
                               config, rng);
          if (plan) return plan;
        }
        return std::nullopt;
      });
}

Provenance make_provenance(const MixPlan& plan,
                           std::vector<NominalSpan> mixed_spans) {
  Provenance p;
  p.source_index = plan.source_index;
  p.variant = plan.variant;
  p.lambda = plan.lambda;
  p.source_spans = plan.spans;
  p.mixed_spans = std::move(mixed_spans);
  p.pool_index = plan.pool_index;
  p.partner_segments = plan.partner_segments;
  return p;
}

}  // namespace

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kMention:
      return "mention";
    case Variant::kToken:
      return "token";
    case Variant::kSynonym:
      return "synonym";
    case Variant::kRelation:
      return "relation";
    case Variant::kWholeSequence:
      return "whole_sequence";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "mention" || name == "mmix") return Variant::kMention;
  if (name == "token" || name == "tmix") return Variant::kToken;
  if (name == "synonym" || name == "smix") return Variant::kSynonym;
  if (name == "relation" || name == "rmix") return Variant::kRelation;
  if (name == "whole_sequence" || name == "whole") return Variant::kWholeSequence;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

std::vector<VariantWeight> parse_variants(std::string_view spec,
                                          std::string_view weights) {
  std::vector<VariantWeight> out;
  for (auto name : split(spec, '+')) out.push_back({parse_variant(name), 1.0});
  if (!weights.empty()) {
    const auto parts = split(weights, ',');
    if (parts.size() != out.size()) {
      throw std::invalid_argument("variant weights do not match variant count");
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
      out[k].weight = std::stod(std::string(parts[k]));
    }
  }
  double total = 0.0;
  for (const auto& vw : out) {
    if (!(vw.weight >= 0.0)) throw std::invalid_argument("negative variant weight");
    total += vw.weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("variant weights sum to zero");
  for (auto& vw : out) vw.weight /= total;
  return out;
}

void MixConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive");
  }
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("augmentation rate must be non-negative");
  }
  if (variants.empty()) throw std::invalid_argument("no variant configured");
  double total = 0.0;
  for (const auto& vw : variants) {
    if (!(vw.weight >= 0.0)) throw std::invalid_argument("negative variant weight");
    total += vw.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("variant weights must sum to 1");
  }
  if (fixed_lambda && !(*fixed_lambda >= 0.0 && *fixed_lambda <= 1.0)) {
    throw std::invalid_argument("fixed lambda must lie in [0, 1]");
  }
  if (threads == 0) throw std::invalid_argument("threads must be positive");
}

Matrix one_hot(std::span<const BioLabel> labels, const Vocabulary& vocab) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(labels.size()),
                            static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out(static_cast<Eigen::Index>(i),
        static_cast<Eigen::Index>(vocab.index_of(labels[i].str()))) = 1.0;
  }
  return out;
}

Vector one_hot(std::string_view label, const Vocabulary& vocab) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(vocab.size()));
  out(static_cast<Eigen::Index>(vocab.index_of(label))) = 1.0;
  return out;
}

std::pair<Matrix, Matrix> pad_to_longer(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("pad_to_longer: column count mismatch");
  }
  const Eigen::Index rows = std::max(a.rows(), b.rows());
  auto pad = [rows](const Matrix& m) {
    if (m.rows() == rows) return m;
    Matrix out = Matrix::Zero(rows, m.cols());
    out.topRows(m.rows()) = m;
    return out;
  };
  return {pad(a), pad(b)};
}

Matrix mix(const Matrix& a, const Matrix& b, double lambda) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("mix: shape mismatch");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("mix: lambda outside [0, 1]");
  }
  return lambda * a + (1.0 - lambda) * b;
}

double sample_lambda(double alpha, Rng& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive");
  }
  return rng.beta(alpha, alpha);
}

std::optional<NominalSpan> select_segment(const Sentence& sentence,
                                          Variant variant,
                                          const SynonymLexicon* lexicon,
                                          Rng& rng) {
  std::vector<NominalSpan> eligible;
  switch (variant) {
    case Variant::kMention:
      for (const auto& m : extract_mentions(sentence.labels)) eligible.push_back(m.span);
      break;
    case Variant::kToken:
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (!sentence.labels[i].is_outside()) eligible.push_back({i, i + 1});
      }
      break;
    case Variant::kSynonym:
      if (lexicon == nullptr) throw std::invalid_argument("synonym variant needs a lexicon");
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (lexicon->contains(sentence.tokens[i])) eligible.push_back({i, i + 1});
      }
      break;
    case Variant::kWholeSequence:
      if (sentence.size() > 0) eligible.push_back({0, sentence.size()});
      break;
    case Variant::kRelation:
      throw std::invalid_argument("relation variant applies to RE samples only");
  }
  if (eligible.empty()) return std::nullopt;
  if (eligible.size() == 1) return eligible.front();
  return eligible[rng.index(eligible.size())];
}

std::optional<MixPlan> plan_mix(const Sentence& sentence,
                                std::size_t source_index, Variant variant,
                                const MixSources& sources,
                                const MixConfig& config, Rng& rng) {
  MixPlan plan;
  plan.source_index = source_index;
  plan.variant = variant;
  plan.lambda = sample_lambda(config.alpha, rng);
  if (config.fixed_lambda) plan.lambda = *config.fixed_lambda;

  auto span = select_segment(sentence, variant, sources.lexicon, rng);
  if (!span) return std::nullopt;
  plan.spans = {*span};

  if (variant == Variant::kSynonym) {
    auto synonym = draw_synonym(*sources.lexicon, sentence.tokens[span->start], rng);
    plan.partner_segments = {{std::move(*synonym)}};
    plan.partner_labels = {{sentence.labels[span->start]}};
    return plan;
  }

  const SegmentPool* pool = variant == Variant::kMention ? sources.mentions
                            : variant == Variant::kToken ? sources.tokens
                                                         : sources.sentences;
  const auto& p = require_pool(pool);
  const bool same_type = config.same_type_only && variant != Variant::kWholeSequence;
  auto index = draw_partner(p, sentence, *span, same_type, rng);
  if (!index) return std::nullopt;
  plan.pool_index = *index;
  plan.partner_segments = p[*index].segments;
  plan.partner_labels = p[*index].labels;
  return plan;
}

MixPlan plan_re_mix(const RESample& sample, std::size_t source_index,
                    const SegmentPool& pool, const MixConfig& config, Rng& rng) {
  if (pool.arity() != 2) throw std::invalid_argument("relation pool must have arity 2");
  MixPlan plan;
  plan.source_index = source_index;
  plan.variant = Variant::kRelation;
  plan.lambda = sample_lambda(config.alpha, rng);
  if (config.fixed_lambda) plan.lambda = *config.fixed_lambda;
  plan.spans = {sample.e1, sample.e2};
  const std::size_t index = draw_tuple_index(pool, rng);
  plan.pool_index = index;
  plan.partner_segments = pool[index].segments;
  plan.partner_relation = pool[index].relation;
  return plan;
}

MixedExample apply_mix(const Sentence& sentence, const MixPlan& plan,
                       const EmbeddingTable& table,
                       const Vocabulary& label_vocab, const MixConfig& config) {
  const Matrix embeddings = table.embed(sentence.tokens);
  const Matrix labels = one_hot(sentence.labels, label_vocab);
  const bool mix_labels = plan.variant != Variant::kSynonym;

  std::vector<Matrix> emb_blocks;
  std::vector<Matrix> label_blocks;
  for (std::size_t j = 0; j < plan.spans.size(); ++j) {
    const NominalSpan& span = plan.spans[j];
    const Matrix partner_emb = table.embed(plan.partner_segments[j]);
    const Eigen::Index keep = weighted_rows(span.size(), partner_emb.rows(), plan.lambda);
    auto [ea, eb] = pad_to_longer(rows_of(embeddings, span), partner_emb);
    emb_blocks.push_back(mix(ea, eb, plan.lambda).topRows(keep));
    if (!mix_labels) {
      label_blocks.push_back(rows_of(labels, span));
      continue;
    }
    const Matrix partner = one_hot(plan.partner_labels[j], label_vocab);
    const Eigen::Index shared = std::min<Eigen::Index>(
        static_cast<Eigen::Index>(span.size()), partner.rows());
    auto [oa, ob] = pad_to_longer(rows_of(labels, span), partner);
    Matrix block = mix(oa, ob, plan.lambda).topRows(keep);
    if (config.normalize_tail_labels) {
      for (Eigen::Index r = shared; r < block.rows(); ++r) {
        const double sum = block.row(r).sum();
        if (sum > 0.0) block.row(r) /= sum;
      }
    }
    label_blocks.push_back(std::move(block));
  }

  MixedExample out;
  std::vector<NominalSpan> mixed_spans;
  std::vector<NominalSpan> label_spans;
  out.embeddings = splice_rows(embeddings, plan.spans, emb_blocks, mixed_spans);
  out.soft_labels = splice_rows(labels, plan.spans, label_blocks, label_spans);
  out.provenance = make_provenance(plan, std::move(mixed_spans));
  return out;
}

MixedRESample apply_re_mix(const RESample& sample, const MixPlan& plan,
                           const EmbeddingTable& table,
                           const Vocabulary& relation_vocab) {
  const Matrix embeddings = table.embed(sample.tokens);
  std::vector<Matrix> blocks;
  for (std::size_t j = 0; j < plan.spans.size(); ++j) {
    const Matrix partner = table.embed(plan.partner_segments[j]);
    const Eigen::Index keep = weighted_rows(plan.spans[j].size(), partner.rows(), plan.lambda);
    auto [ea, eb] = pad_to_longer(rows_of(embeddings, plan.spans[j]), partner);
    blocks.push_back(mix(ea, eb, plan.lambda).topRows(keep));
  }
  MixedRESample out;
  std::vector<NominalSpan> mixed_spans;
  out.embeddings = splice_rows(embeddings, plan.spans, blocks, mixed_spans);
  out.e1 = mixed_spans.at(0);
  out.e2 = mixed_spans.at(1);
  out.relation_label = plan.lambda * one_hot(sample.relation, relation_vocab) +
                       (1.0 - plan.lambda) *
                           one_hot(plan.partner_relation, relation_vocab);
  out.provenance = make_provenance(plan, std::move(mixed_spans));
  return out;
}

Sentence apply_replacement(const Sentence& sentence, const MixPlan& plan) {
  Sentence out;
  std::vector<NominalSpan> spans;
  out.tokens = splice_seq(sentence.tokens, plan.spans, plan.partner_segments, spans);
  if (plan.variant == Variant::kSynonym) {
    out.labels = sentence.labels;
  } else {
    out.labels = splice_seq(sentence.labels, plan.spans, plan.partner_labels, spans);
  }
  return out;
}

RESample apply_re_replacement(const RESample& sample, const MixPlan& plan) {
  RESample out;
  std::vector<NominalSpan> spans;
  out.tokens = splice_seq(sample.tokens, plan.spans, plan.partner_segments, spans);
  out.e1 = spans.at(0);
  out.e2 = spans.at(1);
  out.relation = plan.partner_relation;
  return out;
}

MixedExample mix_example(const Sentence& sentence, Variant variant,
                         const MixSources& sources, const EmbeddingTable& table,
                         const Vocabulary& label_vocab, const MixConfig& config,
                         Rng& rng, std::size_t source_index) {
  check_sources(sources, variant);
  auto plan = plan_mix(sentence, source_index, variant, sources, config, rng);
  if (!plan) throw NoEligibleSegmentError();
  return apply_mix(sentence, *plan, table, label_vocab, config);
}

MixedRESample mix_re_sample(const RESample& sample, const SegmentPool& pool,
                            const EmbeddingTable& table,
                            const Vocabulary& relation_vocab,
                            const MixConfig& config, Rng& rng,
                            std::size_t source_index) {
  const MixPlan plan = plan_re_mix(sample, source_index, pool, config, rng);
  return apply_re_mix(sample, plan, table, relation_vocab);
}

std::size_t augmentation_budget(std::size_t n, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("augmentation rate must be non-negative");
  }
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
}

TaggedCorpus NerReplacement::as_corpus(bool repair) const {
  std::vector<Sentence> copy = sentences;
  if (repair) {
    for (auto& s : copy) repair_bio(s.labels);
  }
  return TaggedCorpus(std::move(copy));
}

NerGeneration segmix_generate(const TaggedCorpus& corpus,
                              const MixSources& sources,
                              const EmbeddingTable& table,
                              const MixConfig& config) {
  NerGeneration result;
  auto plans = plan_corpus(corpus, sources, config, result.target);
  auto mixed = run_slots<std::optional<MixedExample>>(
      plans.size(), config.threads,
      [&](std::size_t j) -> std::optional<MixedExample> {
        if (!plans[j]) return std::nullopt;
        return apply_mix(corpus[plans[j]->source_index], *plans[j], table,
                         corpus.label_vocab(), config);
      });
  for (auto& m : mixed) {
    if (m) {
      result.examples.push_back(std::move(*m));
    } else {
      ++result.skipped;
    }
  }
  return result;
}

REGeneration segmix_generate_re(const RECorpus& corpus, const SegmentPool& pool,
                                const EmbeddingTable& table,
                                const MixConfig& config) {
  config.validate();
  REGeneration result;
  const std::size_t target = augmentation_budget(corpus.size(), config.rate);
  result.target = target;
  if (target == 0) return result;
  if (pool.empty()) throw EmptyPoolError();
  MixConfig slot_config = config;
  slot_config.variants = {{Variant::kMention, 1.0}};
  const auto slots = schedule_slots(corpus.size(), slot_config);
  result.examples = run_slots<MixedRESample>(
      slots.size(), config.threads, [&](std::size_t j) {
        Rng rng(config.seed, "slot", j);
        const std::size_t cand = slots[j].candidate;
        const MixPlan plan = plan_re_mix(corpus[cand], cand, pool, config, rng);
        return apply_re_mix(corpus[cand], plan, table, corpus.relation_vocab());
      });
  return result;
}

NerReplacement replacement_da(const TaggedCorpus& corpus,
                              const MixSources& sources,
                              const MixConfig& config) {
  NerReplacement result;
  auto plans = plan_corpus(corpus, sources, config, result.target);
  for (auto& plan : plans) {
    if (!plan) {
      ++result.skipped;
      continue;
    }
    result.sentences.push_back(apply_replacement(corpus[plan->source_index], *plan));
    result.plans.push_back(std::move(*plan));
  }
  return result;
}

REReplacement replacement_da_re(const RECorpus& corpus, const SegmentPool& pool,
                                const MixConfig& config) {
  config.validate();
  REReplacement result;
  result.target = augmentation_budget(corpus.size(), config.rate);
  if (result.target == 0) return result;
  if (pool.empty()) throw EmptyPoolError();
  MixConfig slot_config = config;
  slot_config.variants = {{Variant::kMention, 1.0}};
  const auto slots = schedule_slots(corpus.size(), slot_config);
  std::vector<RESample> samples;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    Rng rng(config.seed, "slot", j);
    const std::size_t cand = slots[j].candidate;
    MixPlan plan = plan_re_mix(corpus[cand], cand, pool, config, rng);
    samples.push_back(apply_re_replacement(corpus[cand], plan));
    result.plans.push_back(std::move(plan));
  }
  result.corpus = RECorpus(std::move(samples));
  return result;
}

}  // namespace segmix
