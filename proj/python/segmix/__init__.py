# Copyright 2026 The SegMix Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Segment-level mixing augmentation for NER and relation extraction."""

from ._core import (
    DataError,
    EmbeddingTable,
    MixConfig,
    Rng,
    TaggedCorpus,
    augmentation_budget,
    derive_seed,
    entity_f1,
    generate,
    mix,
    pad_to_longer,
    read_conll,
    sample_lambda,
    span_only_f1,
    synthesize_ner_corpus,
)

__all__ = [
    "DataError",
    "EmbeddingTable",
    "MixConfig",
    "Rng",
    "TaggedCorpus",
    "augmentation_budget",
    "derive_seed",
    "entity_f1",
    "generate",
    "mix",
    "pad_to_longer",
    "read_conll",
    "sample_lambda",
    "span_only_f1",
    "synthesize_ner_corpus",
]
