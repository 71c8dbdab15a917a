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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <catch_amalgamated.hpp>

#include "segmix/mixer.h"
#include "segmix/rng.h"

using segmix::Rng;

TEST_CASE("same seed gives the same stream") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("derived streams differ by label and index") {
  const auto s = segmix::derive_seed(7, "slot", 0);
  CHECK(s == segmix::derive_seed(7, "slot", 0));
  CHECK(s != segmix::derive_seed(7, "slot", 1));
  CHECK(s != segmix::derive_seed(7, "slots", 0));
  CHECK(s != segmix::derive_seed(8, "slot", 0));
}

TEST_CASE("uniform stays in [0, 1) with mean near one half") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("index is uniform by chi-square") {
  Rng rng(3);
  const std::size_t k = 10;
  const int n = 100000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    const auto j = rng.index(k);
    REQUIRE(j < k);
    ++counts[j];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / k;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Upper 1% point of chi-square with 9 degrees of freedom.
  CHECK(chi2 < 21.666);
}

TEST_CASE("normal draws have unit variance") {
  Rng rng(5);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  CHECK(mean == Catch::Approx(0.0).margin(0.01));
  CHECK(sq / n - mean * mean == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("gamma mean equals its shape") {
  for (double shape : {0.5, 1.0, 3.0, 8.0}) {
    Rng rng(11);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.gamma(shape);
    CHECK(sum / n == Catch::Approx(shape).epsilon(0.02));
  }
}

TEST_CASE("beta moments match the closed form") {
  struct Case {
    double a;
    double b;
  };
  for (const Case c : {Case{8, 8}, Case{2, 5}, Case{0.5, 0.5}}) {
    Rng rng(13);
    const int n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) {
      x = rng.beta(c.a, c.b);
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 1.0);
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= n - 1;
    const double s = c.a + c.b;
    CHECK(mean == Catch::Approx(c.a / s).margin(0.01));
    CHECK(var == Catch::Approx(c.a * c.b / (s * s * (s + 1))).epsilon(0.15));
  }
}

TEST_CASE("sample_lambda rejects non-positive alpha") {
  Rng rng(1);
  CHECK_THROWS_AS(segmix::sample_lambda(0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(segmix::sample_lambda(-1.0, rng), std::invalid_argument);
}

TEST_CASE("shuffle yields a permutation") {
  Rng rng(17);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  segmix::shuffle(w.begin(), w.end(), rng);
  CHECK(w != v);
  std::sort(w.begin(), w.end());
  CHECK(w == v);
}
