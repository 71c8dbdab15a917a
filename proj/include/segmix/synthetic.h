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

#ifndef SEGMIX_SYNTHETIC_H_
#define SEGMIX_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>

#include "segmix/corpus.h"
#include "segmix/pools.h"

namespace segmix {

// Template-generated NER corpus with six entity types (PER, LOC, ORG, DATE,
// PRODUCT, EVENT). Entity fillers are combinatorial, so disjoint seeds give
// largely disjoint mentions, and a few surnames double as place names.
TaggedCorpus synthesize_ner_corpus(std::size_t sentences, std::uint64_t seed);

// Template-generated relation corpus in SemEval style, both directions plus
// "Other".
RECorpus synthesize_re_corpus(std::size_t samples, std::uint64_t seed);

// Small lexicon over the filler words used by the templates.
SynonymLexicon synthesize_lexicon();

}  // namespace segmix

#endif  // SEGMIX_SYNTHETIC_H_
