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

#include "segmix/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "segmix/errors.h"
#include "segmix/rng.h"

namespace segmix {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::size_t parse_index(std::string_view text, std::size_t line,
                        const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" +
                               std::string(text) + "'");
  }
  return value;
}

}  // namespace

BioLabel BioLabel::parse(std::string_view text) {
  if (text == "O") return outside();
  if (text.size() > 2 && text[1] == '-' && (text[0] == 'B' || text[0] == 'I')) {
    std::string type(text.substr(2));
    return text[0] == 'B' ? begin(std::move(type)) : inside(std::move(type));
  }
  throw std::invalid_argument("malformed BIO label '" + std::string(text) + "'");
}

std::string BioLabel::str() const {
  switch (kind) {
    case BioKind::kOutside:
      return "O";
    case BioKind::kBegin:
      return "B-" + type;
    case BioKind::kInside:
      return "I-" + type;
  }
  return "O";
}

std::vector<BioLabel> parse_labels(const std::vector<std::string>& texts) {
  std::vector<BioLabel> labels;
  labels.reserve(texts.size());
  for (const auto& t : texts) labels.push_back(BioLabel::parse(t));
  return labels;
}

std::vector<Mention> extract_mentions(std::span<const BioLabel> labels) {
  std::vector<Mention> mentions;
  std::optional<Mention> open;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const BioLabel& label = labels[i];
    const bool continues = label.kind == BioKind::kInside && open &&
                           open->type == label.type;
    if (continues) {
      open->span.end = i + 1;
      continue;
    }
    if (open) {
      mentions.push_back(*open);
      open.reset();
    }
    if (!label.is_outside()) open = Mention{{i, i + 1}, label.type};
  }
  if (open) mentions.push_back(*open);
  return mentions;
}

std::optional<std::size_t> find_bio_violation(std::span<const BioLabel> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].kind != BioKind::kInside) continue;
    if (i == 0 || labels[i - 1].is_outside() ||
        labels[i - 1].type != labels[i].type) {
      return i;
    }
  }
  return std::nullopt;
}

void repair_bio(std::vector<BioLabel>& labels) {
  while (auto pos = find_bio_violation(labels)) {
    labels[*pos].kind = BioKind::kBegin;
  }
}

void validate_sentence(const Sentence& sentence, std::size_t index) {
  const std::string where = "sentence " + std::to_string(index);
  if (sentence.tokens.empty()) throw ValidationError(where + ": empty sentence");
  if (sentence.tokens.size() != sentence.labels.size()) {
    throw ValidationError(where + ": token/label count mismatch");
  }
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const auto& tok = sentence.tokens[i];
    if (tok.empty() || tok.find_first_of(" \t\n\r") != std::string::npos) {
      throw ValidationError(where + ", position " + std::to_string(i) +
                            ": invalid token '" + tok + "'");
    }
    const auto& label = sentence.labels[i];
    if (label.is_outside() != label.type.empty()) {
      throw ValidationError(where + ", position " + std::to_string(i) +
                            ": malformed label");
    }
  }
  if (auto pos = find_bio_violation(sentence.labels)) {
    throw ValidationError(where + ", position " + std::to_string(*pos) +
                          ": " + sentence.labels[*pos].str() +
                          " does not continue a mention of the same type");
  }
}

TaggedCorpus::TaggedCorpus() { label_vocab_.add("O"); }

TaggedCorpus::TaggedCorpus(std::vector<Sentence> sentences)
    : sentences_(std::move(sentences)) {
  label_vocab_.add("O");
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    validate_sentence(sentences_[i], i);
    for (const auto& tok : sentences_[i].tokens) token_vocab_.add(tok);
    for (const auto& label : sentences_[i].labels) label_vocab_.add(label.str());
  }
}

void validate_re_sample(const RESample& sample) {
  const std::size_t n = sample.tokens.size();
  if (n == 0) throw ValidationError("empty token sequence");
  for (const auto& tok : sample.tokens) {
    if (tok.empty()) throw ValidationError("empty token");
  }
  for (const NominalSpan* span : {&sample.e1, &sample.e2}) {
    if (span->start >= span->end) throw ValidationError("empty nominal span");
    if (span->end > n) throw ValidationError("nominal span out of range");
  }
  if (sample.e1.overlaps(sample.e2)) {
    throw ValidationError("nominal spans overlap");
  }
  if (sample.relation.empty()) throw ValidationError("empty relation label");
}

RECorpus::RECorpus(std::vector<RESample> samples) : samples_(std::move(samples)) {
  for (const auto& s : samples_) {
    validate_re_sample(s);
    relation_vocab_.add(s.relation);
    for (const auto& tok : s.tokens) token_vocab_.add(tok);
  }
}

TaggedCorpus parse_conll(std::istream& in, const ConllOptions& options) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::size_t line_no = 0;
  std::size_t sentence_start_line = 1;

  auto flush = [&] {
    if (current.tokens.empty()) return;
    if (options.repair_bio) repair_bio(current.labels);
    try {
      validate_sentence(current, sentences.size());
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(e.what()) + " (starting at line " +
                            std::to_string(sentence_start_line) + ")");
    }
    sentences.push_back(std::move(current));
    current = {};
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) {
      flush();
      continue;
    }
    auto fields = split_fields(line);
    if (fields.front().starts_with("-DOCSTART-")) continue;
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected 2 fields (token, label), got " +
                                    std::to_string(fields.size()));
    }
    if (current.tokens.empty()) sentence_start_line = line_no;
    try {
      current.labels.push_back(BioLabel::parse(fields[1]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    current.tokens.emplace_back(fields[0]);
  }
  flush();
  return TaggedCorpus(std::move(sentences));
}

RECorpus parse_re(std::istream& in) {
  std::vector<RESample> samples;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    auto fields = split_on(line, '\t');
    if (fields.size() != 6) {
      throw ParseError(line_no, "expected 6 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    RESample sample;
    for (auto tok : split_fields(fields[0])) sample.tokens.emplace_back(tok);
    sample.e1 = {parse_index(fields[1], line_no, "e1 start"),
                 parse_index(fields[2], line_no, "e1 end")};
    sample.e2 = {parse_index(fields[3], line_no, "e2 start"),
                 parse_index(fields[4], line_no, "e2 end")};
    sample.relation = std::string(fields[5]);
    try {
      validate_re_sample(sample);
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    samples.push_back(std::move(sample));
  }
  return RECorpus(std::move(samples));
}

void write_conll(const TaggedCorpus& corpus, std::ostream& out) {
  bool first = true;
  for (const auto& s : corpus.sentences()) {
    if (!first) out << '\n';
    first = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << s.tokens[i] << '\t' << s.labels[i].str() << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing corpus");
}

void write_re(const RECorpus& corpus, std::ostream& out) {
  for (const auto& s : corpus.samples()) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) out << ' ';
      out << s.tokens[i];
    }
    out << '\t' << s.e1.start << '\t' << s.e1.end << '\t' << s.e2.start << '\t'
        << s.e2.end << '\t' << s.relation << '\n';
  }
  if (!out) throw std::runtime_error("failed writing corpus");
}

TaggedCorpus read_conll_file(const std::filesystem::path& path,
                             const ConllOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return parse_conll(in, options);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

RECorpus read_re_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return parse_re(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<std::size_t> sample_indices(std::size_t population,
                                        std::size_t size, std::uint64_t seed) {
  if (size > population) {
    throw std::invalid_argument("downsample size " + std::to_string(size) +
                                " exceeds corpus size " +
                                std::to_string(population));
  }
  std::vector<std::size_t> order(population);
  for (std::size_t i = 0; i < population; ++i) order[i] = i;
  Rng rng(seed, "downsample");
  // Partial Fisher-Yates: the first `size` slots are a uniform subset.
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + rng.index(population - i);
    std::swap(order[i], order[j]);
  }
  order.resize(size);
  std::sort(order.begin(), order.end());
  return order;
}

TaggedCorpus downsample(const TaggedCorpus& corpus, std::size_t size,
                        std::uint64_t seed) {
  std::vector<Sentence> picked;
  picked.reserve(size);
  for (std::size_t i : sample_indices(corpus.size(), size, seed)) {
    picked.push_back(corpus[i]);
  }
  return TaggedCorpus(std::move(picked));
}

RECorpus downsample(const RECorpus& corpus, std::size_t size,
                    std::uint64_t seed) {
  std::vector<RESample> picked;
  picked.reserve(size);
  for (std::size_t i : sample_indices(corpus.size(), size, seed)) {
    picked.push_back(corpus[i]);
  }
  return RECorpus(std::move(picked));
}

}  // namespace segmix
