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

#ifndef SEGMIX_EMBEDDING_H_
#define SEGMIX_EMBEDDING_H_

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "segmix/vocabulary.h"

namespace segmix {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Token -> dense vector lookup. Surfaces outside the vocabulary fall back to
// one of `unk_buckets` rows chosen by a 64-bit FNV-1a hash, so every surface
// has exactly one row and lookup is a pure function.
class EmbeddingTable {
 public:
  EmbeddingTable(Vocabulary vocab, Matrix vectors, Matrix unk_vectors);

  // Entries ~ N(0, 1), rounded to float precision so that the table
  // survives a save/load cycle bit-exactly.
  static EmbeddingTable random(Vocabulary vocab, std::size_t dim,
                               std::uint64_t seed, std::size_t unk_buckets = 64);

  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  std::size_t vocab_size() const { return vocab_.size(); }
  const Vocabulary& vocab() const { return vocab_; }
  const Matrix& vectors() const { return vectors_; }
  const Matrix& unk_vectors() const { return unk_vectors_; }

  auto row(std::string_view surface) const {
    if (auto id = vocab_.find(surface)) return vectors_.row(static_cast<Eigen::Index>(*id));
    return unk_vectors_.row(static_cast<Eigen::Index>(unk_bucket(surface)));
  }
  std::size_t unk_bucket(std::string_view surface) const;

  // Row j is the vector of tokens[j]; an empty list gives a 0 x dim matrix.
  Matrix embed(std::span<const std::string> tokens) const;

  void save(std::ostream& out) const;
  static EmbeddingTable load(std::istream& in);

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.vocab_ == b.vocab_ && a.vectors_ == b.vectors_ &&
           a.unk_vectors_ == b.unk_vectors_;
  }

 private:
  Vocabulary vocab_;
  Matrix vectors_;
  Matrix unk_vectors_;
};

EmbeddingTable read_table_file(const std::string& path);
void write_table_file(const EmbeddingTable& table, const std::string& path);

}  // namespace segmix

#endif  // SEGMIX_EMBEDDING_H_
