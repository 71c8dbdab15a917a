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

#include "segmix/embedding.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "segmix/binary_io.h"
#include "segmix/rng.h"

namespace segmix {
namespace {

constexpr char kTableMagic[9] = "SGMXEMB1";

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void fill_gaussian(Matrix& m, Rng& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = static_cast<double>(static_cast<float>(rng.normal()));
    }
  }
}

}  // namespace

EmbeddingTable::EmbeddingTable(Vocabulary vocab, Matrix vectors, Matrix unk_vectors)
    : vocab_(std::move(vocab)),
      vectors_(std::move(vectors)),
      unk_vectors_(std::move(unk_vectors)) {
  if (static_cast<std::size_t>(vectors_.rows()) != vocab_.size()) {
    throw std::invalid_argument("embedding rows do not match vocabulary size");
  }
  if (unk_vectors_.rows() < 1) {
    throw std::invalid_argument("embedding table needs at least one unknown bucket");
  }
  if (unk_vectors_.cols() != vectors_.cols() || vectors_.cols() < 1) {
    throw std::invalid_argument("embedding dimension mismatch");
  }
}

EmbeddingTable EmbeddingTable::random(Vocabulary vocab, std::size_t dim,
                                      std::uint64_t seed,
                                      std::size_t unk_buckets) {
  if (dim == 0 || unk_buckets == 0) {
    throw std::invalid_argument("embedding dim and unknown buckets must be positive");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix vectors(static_cast<Eigen::Index>(vocab.size()), d);
  Matrix unk(static_cast<Eigen::Index>(unk_buckets), d);
  Rng rng(seed, "embedding");
  fill_gaussian(vectors, rng);
  fill_gaussian(unk, rng);
  return EmbeddingTable(std::move(vocab), std::move(vectors), std::move(unk));
}

std::size_t EmbeddingTable::unk_bucket(std::string_view surface) const {
  return static_cast<std::size_t>(fnv1a64(surface) %
                                  static_cast<std::uint64_t>(unk_vectors_.rows()));
}

Matrix EmbeddingTable::embed(std::span<const std::string> tokens) const {
  Matrix out(static_cast<Eigen::Index>(tokens.size()), vectors_.cols());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = row(tokens[i]);
  }
  return out;
}

void EmbeddingTable::save(std::ostream& out) const {
  out.write(kTableMagic, 8);
  binary::write_u32(out, 1);  // version
  binary::write_u64(out, vocab_.size());
  binary::write_u64(out, dim());
  binary::write_u64(out, static_cast<std::uint64_t>(unk_vectors_.rows()));
  for (const auto& item : vocab_) binary::write_string(out, item);
  for (const Matrix* m : {&vectors_, &unk_vectors_}) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      for (Eigen::Index c = 0; c < m->cols(); ++c) {
        binary::write_f32(out, static_cast<float>((*m)(r, c)));
      }
    }
  }
  if (!out) throw std::runtime_error("failed writing embedding table");
}

EmbeddingTable EmbeddingTable::load(std::istream& in) {
  binary::expect_magic(in, kTableMagic);
  if (binary::read_u32(in) != 1) throw DataError("unsupported embedding table version");
  const auto v = binary::read_u64(in);
  const auto d = binary::read_u64(in);
  const auto buckets = binary::read_u64(in);
  if (d == 0 || d > (1u << 16) || buckets == 0 || v > (1u << 26)) {
    throw DataError("implausible embedding table header");
  }
  Vocabulary vocab;
  for (std::uint64_t i = 0; i < v; ++i) vocab.add(binary::read_string(in));
  if (vocab.size() != v) throw DataError("duplicate entries in embedding vocabulary");
  Matrix vectors(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(d));
  Matrix unk(static_cast<Eigen::Index>(buckets), static_cast<Eigen::Index>(d));
  for (Matrix* m : {&vectors, &unk}) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      for (Eigen::Index c = 0; c < m->cols(); ++c) {
        (*m)(r, c) = binary::read_f32(in);
      }
    }
  }
  return EmbeddingTable(std::move(vocab), std::move(vectors), std::move(unk));
}

EmbeddingTable read_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return EmbeddingTable::load(in);
}

void write_table_file(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  table.save(out);
}

}  // namespace segmix
