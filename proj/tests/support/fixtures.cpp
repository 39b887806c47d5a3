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

#include "fixtures.hpp"

#include <fmt/format.h>
#include <stdlib.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aitd/splitter.hpp"

namespace aitd::fixtures {

Tokens random_doc(Rng& rng, std::size_t vocab, std::size_t length) {
  Tokens doc;
  doc.reserve(length);
  for (std::size_t i = 0; i < length; ++i) doc.push_back(fmt::format("t{:02}", rng.below(vocab)));
  return doc;
}

std::vector<LabelledText> token_order_task(std::size_t n, std::size_t length, std::uint64_t seed) {
  if (length < 5) throw std::invalid_argument("token-order sequences need length >= 5");
  Rng rng(seed);
  std::vector<LabelledText> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> words(length);
    for (auto& w : words) w = fmt::format("w{:02}", rng.below(20));
    // Interior slots 1..length-2, never adjacent to each other.
    std::size_t a = 0, b = 0;
    do {
      a = 1 + rng.below(length - 2);
      b = 1 + rng.below(length - 2);
    } while (a == b || a + 1 == b || b + 1 == a);
    words[a] = "alpha";
    words[b] = "beta";
    std::string text;
    for (std::size_t i = 0; i < length; ++i) {
      if (i) text += ' ';
      text += words[i];
    }
    out.push_back({std::move(text), a < b ? 1 : 0});
  }
  return out;
}

Corpus token_order_corpus(std::size_t n, std::size_t length, std::uint64_t seed,
                          std::size_t topics) {
  Corpus corpus;
  const auto items = token_order_task(n, length, seed);
  for (std::size_t i = 0; i < items.size(); ++i) {
    corpus.add({fmt::format("r{}", i), items[i].text, items[i].label ? Label::kAi : Label::kHuman,
                fmt::format("topic{}", i % topics)});
  }
  return corpus;
}

std::vector<SourceCount> paper_source_counts() {
  const SplitManifest preset = paper_split_manifest();
  const std::size_t totals[3] = {85897, 24987, 13311};
  std::vector<SourceCount> out;
  for (Partition p : kPartitions) {
    std::vector<std::string> names;
    for (const auto& a : preset.assignments) {
      if (a.partition == p) names.push_back(a.topic);
    }
    const std::size_t total = totals[static_cast<int>(p)];
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::size_t share = total / names.size() + (i < total % names.size() ? 1 : 0);
      out.push_back({names[i], share});
    }
  }
  return out;
}

Corpus paper_count_corpus() {
  const SplitManifest preset = paper_split_manifest();
  Corpus corpus;
  std::size_t id = 0;
  std::size_t test_ai_left = 3594;
  for (const auto& sc : paper_source_counts()) {
    const bool test = preset.find(sc.source) == Partition::kTest;
    for (std::size_t i = 0; i < sc.count; ++i) {
      Label label = (id % 2) ? Label::kAi : Label::kHuman;
      if (test) {
        label = test_ai_left > 0 ? Label::kAi : Label::kHuman;
        if (test_ai_left > 0) --test_ai_left;
      }
      corpus.add({fmt::format("p{}", id++), "x", label, sc.source});
    }
  }
  return corpus;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TempDir::TempDir() {
  std::string pattern = (std::filesystem::temp_directory_path() / "aitd-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace aitd::fixtures
