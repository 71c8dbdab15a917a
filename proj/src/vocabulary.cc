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

#include "segmix/vocabulary.h"

#include <stdexcept>

namespace segmix {

Vocabulary::Vocabulary(const std::vector<std::string>& items) {
  for (const auto& item : items) add(item);
}

std::size_t Vocabulary::add(std::string_view item) {
  std::string key(item);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const std::size_t id = items_.size();
  items_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<std::size_t> Vocabulary::find(std::string_view item) const {
  auto it = index_.find(std::string(item));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::index_of(std::string_view item) const {
  auto id = find(item);
  if (!id) throw std::out_of_range("unknown vocabulary item: " + std::string(item));
  return *id;
}

}  // namespace segmix
