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

#ifndef AITD_TEXTPROC_HPP_
#define AITD_TEXTPROC_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace aitd {

using Tokens = std::vector<std::string>;
using StopList = std::unordered_set<std::string>;

// Lowercased maximal runs of Unicode alphanumerics; runs shorter than two code
// points are dropped. Invalid UTF-8 bytes act as separators.
Tokens tokenize(std::string_view text);

// Order-preserving filter.
Tokens remove_stopwords(const Tokens& tokens, const StopList& stoplist);

// The bundled 179-term English list, parsed once.
const StopList& english_stopwords();
// SHA-256 of the bundled list file, recorded in model headers and reports.
const std::string& english_stopwords_sha256();

struct NgramRange {
  int lo = 1;
  int hi = 1;
};

// Contiguous n-grams for n in [lo, hi], joined with one space, ordered by
// (start position, n). Throws std::invalid_argument unless 1 <= lo <= hi.
Tokens ngrams(const Tokens& tokens, NgramRange range);

inline constexpr std::int32_t kPadId = 0;
inline constexpr std::int32_t kUnkId = 1;
inline constexpr std::size_t kReservedIds = 2;

// Ranked term list. With specials, terms[0] and terms[1] are the "<pad>" and
// "<unk>" placeholders (not present in the index) and real terms start at 2.
struct Vocab {
  std::vector<std::string> terms;
  std::unordered_map<std::string, std::int32_t> index;
  double coverage = 0.0;
  bool specials = false;

  std::size_t size() const { return terms.size(); }
  // -1 when absent.
  std::int32_t find(const std::string& term) const {
    auto it = index.find(term);
    return it == index.end() ? -1 : it->second;
  }

  // Rebuilds `index` from `terms`.
  void reindex();
};

// Ranks terms by occurrence count (desc), ties by term (asc), keeps max_size
// entries including the two specials when reserve_special is set. Throws
// DegenerateDataError when the documents hold no terms at all.
Vocab build_vocab(std::span<const Tokens> docs, std::size_t max_size, bool reserve_special);

struct Encoded {
  std::vector<std::int32_t> ids;
  std::size_t length = 0;
};

// Head-truncates to max_len, maps unknown terms to UNK and pads with PAD.
Encoded encode(const Tokens& tokens, const Vocab& vocab, std::size_t max_len);

// "#vocab v1 size=<n> specials=<0|2>" followed by one term per line.
void save_vocab(const Vocab& vocab, const std::filesystem::path& path);
Vocab load_vocab(const std::filesystem::path& path);

// Featurization used on the TF-IDF path: tokenize, drop stop words, then form
// unigrams and bigrams.
Tokens analyze_for_tfidf(std::string_view text);

}  // namespace aitd

#endif  // AITD_TEXTPROC_HPP_
