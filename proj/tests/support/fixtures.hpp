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

// Synthetic data shared by the unit, integration and acceptance suites.

#ifndef AITD_TESTS_SUPPORT_FIXTURES_HPP_
#define AITD_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aitd/corpus.hpp"
#include "aitd/rng.hpp"
#include "aitd/textproc.hpp"

namespace aitd::fixtures {

// Random document over the terms t00..t{vocab-1}.
Tokens random_doc(Rng& rng, std::size_t vocab, std::size_t length);

struct LabelledText {
  std::string text;
  int label = 0;
};

// Token-order task: filler words w00..w19 with one "alpha" and one "beta"
// placed at non-adjacent interior positions. Label 1 iff alpha comes first.
// Both classes share the same distribution of unigrams and bigrams.
std::vector<LabelledText> token_order_task(std::size_t n, std::size_t length, std::uint64_t seed);

// The same task as a corpus whose records cycle through `topics` sources.
Corpus token_order_corpus(std::size_t n, std::size_t length, std::uint64_t seed,
                          std::size_t topics);

struct SourceCount {
  std::string source;
  std::size_t count = 0;
};

// Per-source counts for the twenty published topics: partition totals
// 85,897 / 24,987 / 13,311 spread evenly over each partition's topics.
std::vector<SourceCount> paper_source_counts();

// Corpus realising paper_source_counts(). The test-partition sources carry
// 9,717 human and 3,594 AI records.
Corpus paper_count_corpus();

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace aitd::fixtures

#endif  // AITD_TESTS_SUPPORT_FIXTURES_HPP_
