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

#include "segmix/eval.h"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace segmix {
namespace {

void check_aligned(const TaggedCorpus& gold,
                   std::span<const std::vector<BioLabel>> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("gold has " + std::to_string(gold.size()) +
                                " sentences, prediction has " +
                                std::to_string(predicted.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != predicted[i].size()) {
      throw std::invalid_argument("length mismatch in sentence " + std::to_string(i));
    }
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

void finish(TypeScore& s) {
  if (s.tp + s.fp + s.fn == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return;
  }
  s.precision = ratio(s.tp, s.tp + s.fp);
  s.recall = ratio(s.tp, s.tp + s.fn);
  s.f1 = harmonic(s.precision, s.recall);
}

std::vector<BioLabel> erase_types(const std::vector<BioLabel>& labels) {
  std::vector<BioLabel> out = labels;
  for (auto& l : out) {
    if (!l.is_outside()) l.type = "SPAN";
  }
  return out;
}

EvalReport score(const TaggedCorpus& gold,
                 std::span<const std::vector<BioLabel>> predicted, bool typed) {
  check_aligned(gold, predicted);
  EvalReport report;
  TypeScore total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g_labels = typed ? gold[i].labels : erase_types(gold[i].labels);
    auto p_labels = typed ? predicted[i] : erase_types(predicted[i]);
    using Key = std::tuple<std::size_t, std::size_t, std::string>;
    std::set<Key> g_set;
    std::set<Key> p_set;
    for (const auto& m : extract_mentions(g_labels)) g_set.insert({m.span.start, m.span.end, m.type});
    for (const auto& m : extract_mentions(p_labels)) p_set.insert({m.span.start, m.span.end, m.type});
    for (const auto& key : g_set) {
      auto& s = report.per_type[std::get<2>(key)];
      if (p_set.count(key)) {
        ++s.tp;
        ++total.tp;
      } else {
        ++s.fn;
        ++total.fn;
      }
    }
    for (const auto& key : p_set) {
      if (g_set.count(key)) continue;
      ++report.per_type[std::get<2>(key)].fp;
      ++total.fp;
    }
  }
  for (auto& [type, s] : report.per_type) finish(s);
  finish(total);
  report.tp = total.tp;
  report.fp = total.fp;
  report.fn = total.fn;
  report.precision = total.precision;
  report.recall = total.recall;
  report.f1 = total.f1;
  return report;
}

}  // namespace

std::vector<BioLabel> decode_labels(const Matrix& scores, const Vocabulary& vocab,
                                    bool repair) {
  if (static_cast<std::size_t>(scores.cols()) != vocab.size()) {
    throw std::invalid_argument("score width does not match label vocabulary");
  }
  std::vector<BioLabel> out;
  out.reserve(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(r, c) > scores(r, best)) best = c;
    }
    out.push_back(BioLabel::parse(vocab.at(static_cast<std::size_t>(best))));
  }
  if (repair) repair_bio(out);
  return out;
}

EvalReport entity_f1(const TaggedCorpus& gold,
                     std::span<const std::vector<BioLabel>> predicted) {
  EvalReport report = score(gold, predicted, true);
  report.confusion = confusion_matrix(gold, predicted);
  return report;
}

EvalReport span_only_f1(const TaggedCorpus& gold,
                        std::span<const std::vector<BioLabel>> predicted) {
  EvalReport report = score(gold, predicted, false);
  std::vector<Sentence> erased;
  std::vector<std::vector<BioLabel>> pred_erased;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    erased.push_back({gold[i].tokens, erase_types(gold[i].labels)});
    pred_erased.push_back(erase_types(predicted[i]));
  }
  report.confusion = confusion_matrix(TaggedCorpus(std::move(erased)), pred_erased);
  return report;
}

ConfusionMatrix confusion_matrix(const TaggedCorpus& gold,
                                 std::span<const std::vector<BioLabel>> predicted) {
  check_aligned(gold, predicted);
  Vocabulary types;
  types.add("O");
  for (const auto& s : gold.sentences()) {
    for (const auto& l : s.labels) {
      if (!l.is_outside()) types.add(l.type);
    }
  }
  for (const auto& labels : predicted) {
    for (const auto& l : labels) {
      if (!l.is_outside()) types.add(l.type);
    }
  }
  ConfusionMatrix m;
  m.labels = types.items();
  m.counts.assign(types.size(), std::vector<std::size_t>(types.size(), 0));
  auto type_of = [&](const BioLabel& l) {
    return types.index_of(l.is_outside() ? "O" : l.type);
  };
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t t = 0; t < gold[i].size(); ++t) {
      ++m.counts[type_of(gold[i].labels[t])][type_of(predicted[i][t])];
    }
  }
  return m;
}

void write_confusion_csv(const ConfusionMatrix& matrix, std::ostream& out) {
  out << "gold\\pred";
  for (const auto& l : matrix.labels) out << ',' << l;
  out << '\n';
  for (std::size_t r = 0; r < matrix.labels.size(); ++r) {
    out << matrix.labels[r];
    for (std::size_t c = 0; c < matrix.labels.size(); ++c) out << ',' << matrix.counts[r][c];
    out << '\n';
  }
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["tp"] = tp;
  j["fp"] = fp;
  j["fn"] = fn;
  j["support"] = support();
  auto& types = j["per_type"] = nlohmann::json::object();
  for (const auto& [type, s] : per_type) {
    types[type] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                   {"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn}, {"support", s.support()}};
  }
  j["confusion"] = {{"labels", confusion.labels}, {"counts", confusion.counts}};
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::string out = fmt::format("{:<16} {:>9} {:>9} {:>9} {:>8}\n", "type",
                                "precision", "recall", "f1", "support");
  for (const auto& [type, s] : per_type) {
    out += fmt::format("{:<16} {:>9.4f} {:>9.4f} {:>9.4f} {:>8}\n", type,
                       s.precision, s.recall, s.f1, s.support());
  }
  out += fmt::format("{:<16} {:>9.4f} {:>9.4f} {:>9.4f} {:>8}\n", "micro",
                     precision, recall, f1, support());
  return out;
}

std::string relation_type(std::string_view label) {
  if (relation_direction(label)) label.remove_suffix(7);
  return std::string(label);
}

std::optional<std::string> relation_direction(std::string_view label) {
  for (std::string_view dir : {"(e1,e2)", "(e2,e1)"}) {
    if (label.ends_with(dir)) return std::string(dir);
  }
  return std::nullopt;
}

std::string REAccuracy::to_json() const {
  nlohmann::json j;
  j["total"] = total;
  j["full"] = full;
  j["type_only"] = type_only;
  j["direction_only"] = direction_only;
  j["full_hits"] = full_hits;
  j["type_hits"] = type_hits;
  j["direction_hits"] = direction_hits;
  return j.dump(2);
}

REAccuracy re_accuracy(const RECorpus& gold, std::span<const std::string> predicted,
                       const Vocabulary* vocab) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("gold and predicted relation counts differ");
  }
  const Vocabulary& labels = vocab ? *vocab : gold.relation_vocab();
  REAccuracy acc;
  acc.total = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::string& g = gold[i].relation;
    const std::string& p = predicted[i];
    if (!labels.contains(p)) {
      throw std::invalid_argument("predicted relation '" + p + "' not in vocabulary");
    }
    if (g == p) ++acc.full_hits;
    if (relation_type(g) == relation_type(p)) ++acc.type_hits;
    const auto gd = relation_direction(g);
    const auto pd = relation_direction(p);
    if (!gd || !pd || *gd == *pd) ++acc.direction_hits;
  }
  acc.full = ratio(acc.full_hits, acc.total);
  acc.type_only = ratio(acc.type_hits, acc.total);
  acc.direction_only = ratio(acc.direction_hits, acc.total);
  return acc;
}

std::size_t nearest_token_index(const EmbeddingTable& table,
                                const Eigen::Ref<const Vector>& vector) {
  if (table.vocab_size() == 0) throw std::invalid_argument("empty vocabulary");
  if (static_cast<std::size_t>(vector.size()) != table.dim()) {
    throw std::invalid_argument("vector dim does not match embedding dim");
  }
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < table.vectors().rows(); ++r) {
    const double dist = (table.vectors().row(r).transpose() - vector).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<std::size_t>(r);
    }
  }
  return best;
}

std::string nearest_token(const EmbeddingTable& table,
                          const Eigen::Ref<const Vector>& vector) {
  return table.vocab().at(nearest_token_index(table, vector));
}

}  // namespace segmix
