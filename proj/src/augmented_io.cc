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

#include "segmix/augmented_io.h"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "segmix/errors.h"

namespace segmix {
namespace {

using nlohmann::json;

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr int kFormatVersion = 1;

json spans_to_json(const std::vector<NominalSpan>& spans) {
  json out = json::array();
  for (const auto& s : spans) out.push_back({s.start, s.end});
  return out;
}

std::vector<NominalSpan> spans_from_json(const json& j) {
  std::vector<NominalSpan> out;
  for (const auto& s : j) out.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
  return out;
}

json provenance_to_json(const Provenance& p) {
  json out;
  out["source_index"] = p.source_index;
  out["variant"] = to_string(p.variant);
  out["lambda"] = p.lambda;
  out["source_spans"] = spans_to_json(p.source_spans);
  out["mixed_spans"] = spans_to_json(p.mixed_spans);
  out["pool_index"] = p.pool_index ? json(*p.pool_index) : json(nullptr);
  out["partner_segments"] = p.partner_segments;
  return out;
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.source_index = j.at("source_index").get<std::size_t>();
  p.variant = parse_variant(j.at("variant").get<std::string>());
  p.lambda = j.at("lambda").get<double>();
  p.source_spans = spans_from_json(j.at("source_spans"));
  p.mixed_spans = spans_from_json(j.at("mixed_spans"));
  if (!j.at("pool_index").is_null()) p.pool_index = j.at("pool_index").get<std::size_t>();
  p.partner_segments =
      j.at("partner_segments").get<std::vector<std::vector<std::string>>>();
  return p;
}

json header(std::string_view task, const Vocabulary& vocab, std::size_t dim,
            std::size_t count) {
  json h;
  h["record"] = "header";
  h["format"] = "segmix-augmented";
  h["version"] = kFormatVersion;
  h["task"] = task;
  h["dim"] = dim;
  h["count"] = count;
  h[task == "ner" ? "label_vocab" : "relation_vocab"] = vocab.items();
  return h;
}

// Reads the header and hands each example record to `on_example`.
template <typename Fn>
json read_records(std::istream& in, std::string_view task, Fn on_example) {
  std::string line;
  std::size_t line_no = 0;
  json head;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    try {
      if (head.is_null()) {
        if (rec.value("record", "") != "header" ||
            rec.value("format", "") != "segmix-augmented") {
          throw ParseError(line_no, "missing augmented-file header");
        }
        if (rec.at("version").get<int>() != kFormatVersion) {
          throw ParseError(line_no, "unsupported augmented-file version");
        }
        if (rec.at("task").get<std::string>() != task) {
          throw ParseError(line_no, "augmented file holds task '" +
                                        rec.at("task").get<std::string>() + "'");
        }
        head = std::move(rec);
        continue;
      }
      on_example(rec, head.at("dim").get<std::size_t>());
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (head.is_null()) throw DataError("empty augmented file");
  return head;
}

}  // namespace

std::string base64_encode(std::span<const unsigned char> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (std::size_t k = 0; k < kAlphabet.size(); ++k) {
    lookup[static_cast<unsigned char>(kAlphabet[k])] = static_cast<int>(k);
  }
  if (text.size() % 4 != 0) throw DataError("base64 length not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + static_cast<std::size_t>(k)];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        vals[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw DataError("invalid base64 padding");
      vals[k] = lookup[static_cast<unsigned char>(c)];
      if (vals[k] < 0) throw DataError("invalid base64 character");
    }
    const std::uint32_t v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<unsigned char>(v & 0xff));
  }
  return out;
}

std::string encode_matrix(const Matrix& m) {
  std::vector<unsigned char> bytes;
  bytes.reserve(static_cast<std::size_t>(m.size()) * 4);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(m(r, c)));
      for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<unsigned char>(bits >> (8 * k)));
    }
  }
  return base64_encode(bytes);
}

Matrix decode_matrix(std::string_view text, std::size_t rows, std::size_t cols) {
  const auto bytes = base64_decode(text);
  if (bytes.size() != rows * cols * 4) {
    throw DataError("matrix payload does not match its shape");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t pos = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::uint32_t bits = 0;
      for (int k = 0; k < 4; ++k) bits |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * k);
      m(r, c) = std::bit_cast<float>(bits);
    }
  }
  return m;
}

void write_augmented(std::ostream& out, const Vocabulary& label_vocab,
                     std::size_t dim, std::span<const MixedExample> examples) {
  out << header("ner", label_vocab, dim, examples.size()).dump() << '\n';
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    json rec;
    rec["record"] = "example";
    rec["index"] = i;
    rec["rows"] = ex.embeddings.rows();
    rec["dim"] = ex.embeddings.cols();
    rec["num_labels"] = ex.soft_labels.cols();
    rec["embeddings"] = encode_matrix(ex.embeddings);
    rec["soft_labels"] = encode_matrix(ex.soft_labels);
    rec["provenance"] = provenance_to_json(ex.provenance);
    out << rec.dump() << '\n';
  }
  if (!out) throw std::runtime_error("failed writing augmented file");
}

void write_augmented(std::ostream& out, const Vocabulary& relation_vocab,
                     std::size_t dim, std::span<const MixedRESample> examples) {
  out << header("re", relation_vocab, dim, examples.size()).dump() << '\n';
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    json rec;
    rec["record"] = "example";
    rec["index"] = i;
    rec["rows"] = ex.embeddings.rows();
    rec["dim"] = ex.embeddings.cols();
    rec["num_relations"] = ex.relation_label.size();
    rec["embeddings"] = encode_matrix(ex.embeddings);
    rec["relation_label"] = encode_matrix(ex.relation_label.transpose());
    rec["e1"] = {ex.e1.start, ex.e1.end};
    rec["e2"] = {ex.e2.start, ex.e2.end};
    rec["provenance"] = provenance_to_json(ex.provenance);
    out << rec.dump() << '\n';
  }
  if (!out) throw std::runtime_error("failed writing augmented file");
}

std::string peek_augmented_task(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  try {
    return json::parse(line).at("task").get<std::string>();
  } catch (const json::exception&) {
    throw DataError(path + ": missing augmented-file header");
  }
}

AugmentedNerFile read_augmented_ner(std::istream& in) {
  AugmentedNerFile file;
  json head = read_records(in, "ner", [&](const json& rec, std::size_t dim) {
    const auto rows = rec.at("rows").get<std::size_t>();
    const auto d = rec.at("dim").get<std::size_t>();
    if (d != dim) throw DataError("example dim differs from header dim");
    MixedExample ex;
    ex.embeddings = decode_matrix(rec.at("embeddings").get<std::string>(), rows, d);
    ex.soft_labels = decode_matrix(rec.at("soft_labels").get<std::string>(), rows,
                                   rec.at("num_labels").get<std::size_t>());
    ex.provenance = provenance_from_json(rec.at("provenance"));
    file.examples.push_back(std::move(ex));
  });
  file.label_vocab = Vocabulary(head.at("label_vocab").get<std::vector<std::string>>());
  file.dim = head.at("dim").get<std::size_t>();
  for (const auto& ex : file.examples) {
    if (static_cast<std::size_t>(ex.soft_labels.cols()) != file.label_vocab.size()) {
      throw DataError("soft-label width differs from label vocabulary");
    }
  }
  return file;
}

AugmentedREFile read_augmented_re(std::istream& in) {
  AugmentedREFile file;
  json head = read_records(in, "re", [&](const json& rec, std::size_t dim) {
    const auto rows = rec.at("rows").get<std::size_t>();
    const auto d = rec.at("dim").get<std::size_t>();
    if (d != dim) throw DataError("example dim differs from header dim");
    MixedRESample ex;
    ex.embeddings = decode_matrix(rec.at("embeddings").get<std::string>(), rows, d);
    const auto nr = rec.at("num_relations").get<std::size_t>();
    ex.relation_label = decode_matrix(rec.at("relation_label").get<std::string>(), 1, nr)
                            .row(0)
                            .transpose();
    ex.e1 = {rec.at("e1").at(0).get<std::size_t>(), rec.at("e1").at(1).get<std::size_t>()};
    ex.e2 = {rec.at("e2").at(0).get<std::size_t>(), rec.at("e2").at(1).get<std::size_t>()};
    ex.provenance = provenance_from_json(rec.at("provenance"));
    file.examples.push_back(std::move(ex));
  });
  file.relation_vocab =
      Vocabulary(head.at("relation_vocab").get<std::vector<std::string>>());
  file.dim = head.at("dim").get<std::size_t>();
  return file;
}

}  // namespace segmix
