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

#include "aitd/textproc.hpp"

#include <fmt/format.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aitd/error.hpp"
#include "aitd/hash.hpp"
#include "aitd/resources.hpp"

namespace aitd {

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  std::size_t current_chars = 0;
  auto flush = [&] {
    if (current_chars >= 2) out.push_back(current);
    current.clear();
    current_chars = 0;
  };

  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 cp;
    U8_NEXT(bytes, i, length, cp);
    if (cp < 0 || !u_isalnum(cp)) {
      flush();
      continue;
    }
    const UChar32 lower = u_tolower(cp);
    char buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    UBool error = false;
    U8_APPEND(reinterpret_cast<std::uint8_t*>(buf), n, U8_MAX_LENGTH, lower, error);
    if (error) continue;
    current.append(buf, static_cast<std::size_t>(n));
    ++current_chars;
  }
  flush();
  return out;
}

Tokens remove_stopwords(const Tokens& tokens, const StopList& stoplist) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t)) out.push_back(t);
  }
  return out;
}

const StopList& english_stopwords() {
  static const StopList list = [] {
    StopList words;
    std::istringstream in{std::string(resources::stopwords_en())};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      words.insert(line);
    }
    return words;
  }();
  return list;
}

const std::string& english_stopwords_sha256() {
  static const std::string digest = sha256_hex(resources::stopwords_en());
  return digest;
}

Tokens ngrams(const Tokens& tokens, NgramRange range) {
  if (range.lo < 1 || range.hi < range.lo) {
    throw std::invalid_argument(
        fmt::format("invalid n-gram range ({}, {})", range.lo, range.hi));
  }
  Tokens out;
  const std::size_t n_tokens = tokens.size();
  for (int n = range.lo; n <= range.hi; ++n) {
    const auto width = static_cast<std::size_t>(n);
    for (std::size_t pos = 0; pos + width <= n_tokens; ++pos) {
      std::string gram = tokens[pos];
      for (std::size_t k = 1; k < width; ++k) {
        gram += ' ';
        gram += tokens[pos + k];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

void Vocab::reindex() {
  index.clear();
  index.reserve(terms.size());
  for (std::size_t i = specials ? kReservedIds : 0; i < terms.size(); ++i) {
    index.emplace(terms[i], static_cast<std::int32_t>(i));
  }
}

Vocab build_vocab(std::span<const Tokens> docs, std::size_t max_size, bool reserve_special) {
  if (max_size < 1) throw std::invalid_argument("vocabulary max_size must be >= 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& doc : docs) {
    for (const auto& term : doc) ++counts[term];
    total += doc.size();
  }
  if (total == 0) throw DegenerateDataError("cannot build a vocabulary from an empty corpus");

  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  const std::size_t reserved = reserve_special ? kReservedIds : 0;
  const std::size_t keep = max_size > reserved ? max_size - reserved : 0;
  if (ranked.size() > keep) ranked.resize(keep);

  Vocab vocab;
  vocab.specials = reserve_special;
  if (reserve_special) {
    vocab.terms.push_back("<pad>");
    vocab.terms.push_back("<unk>");
  }
  std::uint64_t covered = 0;
  for (auto& [term, count] : ranked) {
    covered += count;
    vocab.terms.push_back(std::move(term));
  }
  vocab.coverage = static_cast<double>(covered) / static_cast<double>(total);
  vocab.reindex();
  return vocab;
}

Encoded encode(const Tokens& tokens, const Vocab& vocab, std::size_t max_len) {
  Encoded out;
  out.ids.assign(max_len, kPadId);
  out.length = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < out.length; ++i) {
    const std::int32_t id = vocab.find(tokens[i]);
    out.ids[i] = id < 0 ? kUnkId : id;
  }
  return out;
}

void save_vocab(const Vocab& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << fmt::format("#vocab v1 size={} specials={}\n", vocab.size(),
                     vocab.specials ? kReservedIds : 0);
  for (const auto& term : vocab.terms) out << term << '\n';
  if (!out) throw InputError("write failed for " + path.string());
}

Vocab load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  std::size_t size = 0;
  int specials = -1;
  if (std::sscanf(header.c_str(), "#vocab v1 size=%zu specials=%d", &size, &specials) != 2 ||
      (specials != 0 && specials != 2)) {
    throw FormatError(path.string() + ": bad vocabulary header '" + header + "'");
  }
  Vocab vocab;
  vocab.specials = specials == 2;
  std::string line;
  while (std::getline(in, line)) vocab.terms.push_back(line);
  if (vocab.terms.size() != size) {
    throw FormatError(fmt::format("{}: header declares {} terms, found {}", path.string(),
                                  size, vocab.terms.size()));
  }
  vocab.reindex();
  return vocab;
}

Tokens analyze_for_tfidf(std::string_view text) {
  return ngrams(remove_stopwords(tokenize(text), english_stopwords()), {1, 2});
}

}  // namespace aitd
