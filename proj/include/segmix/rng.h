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

#ifndef SEGMIX_RNG_H_
#define SEGMIX_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace segmix {

// Derives an independent stream seed from a root seed, a component label and
// an index. Every random stream in the toolkit is obtained this way, so the
// draws of one component never depend on how many draws another one made.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                          std::uint64_t index = 0);

// xoshiro256** generator with hand-written distributions. The standard
// library distributions are implementation-defined, which would make seeded
// runs differ between toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t root, std::string_view label, std::uint64_t index = 0)
      : Rng(derive_seed(root, label, index)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  std::uint64_t next();

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  // Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  double normal();

  // Marsaglia-Tsang; shape < 1 uses the u^(1/shape) boost.
  double gamma(double shape);

  // Ratio of two gamma draws; always lands in [0, 1].
  double beta(double a, double b);

 private:
  std::array<std::uint64_t, 4> state_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Fisher-Yates shuffle driven by Rng::index.
template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, Rng& rng) {
  const auto n = static_cast<std::size_t>(last - first);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.index(i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace segmix

#endif  // SEGMIX_RNG_H_
