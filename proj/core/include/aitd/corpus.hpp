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

#ifndef AITD_CORPUS_HPP_
#define AITD_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace aitd {

enum class Label : int { kHuman = 0, kAi = 1 };

inline int to_int(Label label) { return static_cast<int>(label); }

// One labelled text sample tagged with its topic/source.
struct Record {
  std::string id;
  std::string text;
  Label label = Label::kHuman;
  std::string source;

  friend bool operator==(const Record&, const Record&) = default;
};

// Ordered, id-unique collection of records. Iteration order is insertion
// order.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string provenance) : provenance_(std::move(provenance)) {}

  // Throws InputError when the id is already present.
  void add(Record record);
  bool contains_id(std::string_view id) const;

  std::span<const Record> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  // Labels as 0/1 ints, in record order.
  std::vector<int> labels() const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.records_ == b.records_;
  }

 private:
  std::vector<Record> records_;
  std::unordered_set<std::string> ids_;
  std::string provenance_;
};

// Column names used by load_csv. `id` may be empty (ids are then generated).
// `source_prefix` is prepended to every source value, e.g. "DAIGT_v2_".
struct CsvColumnMap {
  std::string text = "text";
  std::string label = "label";
  std::string source = "source";
  std::string id;
  std::string source_prefix;
};

// JSONL: one {"id"?, "text", "label", "source"} object per line. A null text
// is accepted here and removed by clean(). Missing ids become
// "<filename>:<line>".
Corpus load_jsonl(const std::filesystem::path& path);

// RFC-4180 CSV with a header row.
Corpus load_csv(const std::filesystem::path& path, const CsvColumnMap& columns);

// Dispatches on extension: .csv goes through load_csv, everything else is
// treated as JSONL.
Corpus load_any(const std::filesystem::path& path, const CsvColumnMap& columns = {});

// Writes records as JSONL in corpus order (the load_jsonl schema).
void save_jsonl(const Corpus& corpus, const std::filesystem::path& path);

// Label coercion for textual label columns:
//   0, 0.0, human, false, no  -> human
//   1, 1.0, ai, true, yes     -> AI
// Matching is case-insensitive after trimming. Returns nullopt otherwise.
std::optional<Label> parse_label(std::string_view raw);

// Concatenates corpora in the given order. Colliding ids are renamed to
// "<id>#<n>"; the original ids that collided are appended to `collisions`.
Corpus concat(std::span<const Corpus> parts,
              std::vector<std::string>* collisions = nullptr);

struct CleanResult {
  Corpus corpus;
  std::size_t dropped = 0;
};

// Drops records whose text is empty or whitespace-only, normalises CRLF to LF
// and trims leading/trailing ASCII whitespace.
CleanResult clean(const Corpus& corpus);

struct LabelCounts {
  std::size_t total = 0;
  std::size_t human = 0;
  std::size_t ai = 0;

  double human_ratio() const { return total ? double(human) / double(total) : 0.0; }
  double ai_ratio() const { return total ? double(ai) / double(total) : 0.0; }
};

struct CorpusStats {
  LabelCounts overall;
  std::map<std::string, LabelCounts> per_source;
  std::size_t dropped = 0;
  std::size_t duplicate_id_collisions = 0;
};

CorpusStats stats(const Corpus& corpus);

// Plain-text rendering of the per-source table.
std::string format_stats(const CorpusStats& stats);

}  // namespace aitd

#endif  // AITD_CORPUS_HPP_
