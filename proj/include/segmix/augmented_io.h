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

#ifndef SEGMIX_AUGMENTED_IO_H_
#define SEGMIX_AUGMENTED_IO_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segmix/embedding.h"
#include "segmix/mixer.h"
#include "segmix/vocabulary.h"

// Augmented dataset files: JSON lines, a header record followed by one record
// per example. Matrices are base64 of row-major little-endian float32 with
// explicit shapes. The layout is documented in docs/formats.md.
namespace segmix {

std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

std::string encode_matrix(const Matrix& m);
Matrix decode_matrix(std::string_view text, std::size_t rows, std::size_t cols);

struct AugmentedNerFile {
  Vocabulary label_vocab;
  std::size_t dim = 0;
  std::vector<MixedExample> examples;
};

struct AugmentedREFile {
  Vocabulary relation_vocab;
  std::size_t dim = 0;
  std::vector<MixedRESample> examples;
};

void write_augmented(std::ostream& out, const Vocabulary& label_vocab,
                     std::size_t dim, std::span<const MixedExample> examples);
void write_augmented(std::ostream& out, const Vocabulary& relation_vocab,
                     std::size_t dim, std::span<const MixedRESample> examples);

// Returns "ner" or "re" from the header without consuming the stream.
std::string peek_augmented_task(const std::string& path);

AugmentedNerFile read_augmented_ner(std::istream& in);
AugmentedREFile read_augmented_re(std::istream& in);

}  // namespace segmix

#endif  // SEGMIX_AUGMENTED_IO_H_
