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

#ifndef AITD_SPLITTER_HPP_
#define AITD_SPLITTER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aitd/corpus.hpp"

namespace aitd {

enum class Partition : int { kTrain = 0, kVal = 1, kTest = 2 };

inline constexpr std::array<Partition, 3> kPartitions = {Partition::kTrain,
                                                         Partition::kVal,
                                                         Partition::kTest};

std::string_view to_string(Partition p);
std::optional<Partition> parse_partition(std::string_view name);

struct TopicAssignment {
  std::string topic;
  Partition partition;

  friend bool operator==(const TopicAssignment&, const TopicAssignment&) = default;
};

// Topic -> partition map plus the targets and seed that produced it.
//
// Entries are kept as an ordered list rather than a map so that a manifest read
// from disk with a topic listed twice is represented faithfully; such a
// manifest is not a partition and verify_no_leakage rejects it.
struct SplitManifest {
  std::array<double, 3> targets{0.7, 0.2, 0.1};
  std::uint64_t seed = 42;
  std::vector<TopicAssignment> assignments;

  // First assignment for `topic`, if any.
  std::optional<Partition> find(std::string_view topic) const;
  // True when every topic appears exactly once.
  bool is_partition() const;
  std::size_t count(Partition p) const;

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

// Fractions must lie in (0,1) and sum to 1 within 1e-9; throws InputError.
void validate_targets(const std::array<double, 3>& targets);

struct AssignOptions {
  // Shuffle runs of equal-size topics with the manifest seed before the
  // greedy pass. Off by default; ties then fall back to topic name order.
  bool shuffle_equal_size = false;
};

// Greedy largest-topic-first assignment. Topics are visited by (record count
// desc, name asc); each goes to the partition whose fill fraction is furthest
// below target (ties: train, val, test), except that once the remaining topics
// are only just enough to populate the still-empty partitions, they go there.
SplitManifest assign_topics(const Corpus& corpus, const std::array<double, 3>& targets,
                            std::uint64_t seed, const AssignOptions& options = {});

// Same procedure from bare per-topic counts.
SplitManifest assign_topics(const std::map<std::string, std::size_t>& topic_sizes,
                            const std::array<double, 3>& targets, std::uint64_t seed,
                            const AssignOptions& options = {});

struct SplitResult {
  Corpus train;
  Corpus val;
  Corpus test;
  // Manifest topics with no records in the corpus.
  std::vector<std::string> warnings;

  const Corpus& operator[](Partition p) const;
};

// Routes every record by its source. Throws InputError for a source missing
// from the manifest. A topic listed more than once is routed by its first
// entry.
SplitResult apply_manifest(const Corpus& corpus, const SplitManifest& manifest);

struct LeakageViolation {
  std::string topic;
  // Partitions whose records contain the topic, and partitions the manifest
  // assigns it to.
  std::vector<Partition> observed;
  std::vector<Partition> declared;
};

struct LeakageReport {
  bool pass = true;
  std::vector<LeakageViolation> violations;
};

// PASS iff each topic found in the records occurs in exactly one partition and
// that partition is the manifest's (unique) assignment for it.
LeakageReport verify_no_leakage(const SplitManifest& manifest, const Corpus& train,
                                const Corpus& val, const Corpus& test);

// {"targets":[t,v,s],"seed":n,"assignments":{"<topic>":"train|val|test",...}}
std::string manifest_to_json(const SplitManifest& manifest);
// Duplicate topic keys are preserved as separate entries. Unknown top-level
// keys (e.g. "note") are ignored.
SplitManifest manifest_from_json(std::string_view text);
SplitManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const SplitManifest& manifest, const std::filesystem::path& path);

// The published topic assignment shipped in resources/paper-split.json.
SplitManifest paper_split_manifest();

std::string leakage_report_to_json(const LeakageReport& report);

}  // namespace aitd

#endif  // AITD_SPLITTER_HPP_
