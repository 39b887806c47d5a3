/*
 * Copyright 2026 The aitd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aitd/parallel.hpp"
#include "aitd/rng.hpp"

namespace aitd {
namespace {

TEST(Rng, SplitmixReferenceValues) {
  // First outputs of splitmix64 seeded with 0.
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(s), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, SeedAndStreamDeterminism) {
  Rng a(42), b(42), c(43);
  Rng d(42, RngStream::kShuffle);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 8; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
    vd.push_back(d.next_u64());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  EXPECT_NE(va, vd);
}

TEST(Rng, UniformAndBelowRanges) {
  Rng r(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++hist[r.below(7)];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal(1.0, 2.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 1.0, 0.02);
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 2.0, 0.02);
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(3);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  r.shuffle(std::span(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  std::vector<int> ident(50);
  std::iota(ident.begin(), ident.end(), 0);
  EXPECT_NE(v, ident);
}

TEST(Parallel, ChunksCoverRangeInOrder) {
  for (std::size_t threads : {1u, 2u, 3u, 8u}) {
    std::vector<int> hits(17, 0);
    std::vector<std::pair<std::size_t, std::size_t>> spans(effective_chunks(17, threads));
    parallel_chunks(17, threads, [&](std::size_t k, std::size_t b, std::size_t e) {
      spans[k] = {b, e};
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) EXPECT_EQ(h, 1);
    for (std::size_t k = 1; k < spans.size(); ++k) EXPECT_EQ(spans[k].first, spans[k - 1].second);
  }
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_chunks(4, 2,
                               [](std::size_t k, std::size_t, std::size_t) {
                                 if (k == 1) throw std::runtime_error("boom");
                               }),
               std::runtime_error);
}

}  // namespace
}  // namespace aitd
