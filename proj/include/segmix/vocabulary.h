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

#ifndef SEGMIX_VOCABULARY_H_
#define SEGMIX_VOCABULARY_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace segmix {

// Ordered set of strings. Indices follow insertion order, so one-hot columns
// stay stable when a corpus is extended.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const std::vector<std::string>& items);

  // Returns the index of `item`, inserting it at the end when new.
  std::size_t add(std::string_view item);

  std::optional<std::size_t> find(std::string_view item) const;
  // Throws std::out_of_range for unknown items.
  std::size_t index_of(std::string_view item) const;
  bool contains(std::string_view item) const { return find(item).has_value(); }

  const std::string& at(std::size_t i) const { return items_.at(i); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<std::string>& items() const { return items_; }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.items_ == b.items_;
  }

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace segmix

#endif  // SEGMIX_VOCABULARY_H_
