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

#ifndef AITD_TFIDF_HPP_
#define AITD_TFIDF_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aitd/textproc.hpp"

namespace aitd {

// Sparse row with strictly increasing indices. Non-empty TF-IDF rows have
// unit L2 norm.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dim = 0;

  std::size_t nnz() const { return indices.size(); }
  double dot(std::span<const double> dense) const;
  double norm() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

SparseVector sparse_from_dense(std::span<const double> dense);

struct TfidfModel {
  Vocab vocab;              // n-gram terms, no specials
  std::vector<double> idf;  // idf[rank]
  std::size_t n_docs = 0;

  std::size_t dim() const { return vocab.size(); }
};

// Vocabulary of the max_features most frequent grams, with smoothed idf
// ln((1 + N) / (1 + df)) + 1.
TfidfModel fit_tfidf(std::span<const Tokens> docs, std::size_t max_features);

// Raw counts times idf, L2-normalised. Out-of-vocabulary grams are ignored; a
// document with none in vocabulary maps to the empty vector.
SparseVector transform(const TfidfModel& model, const Tokens& doc);
std::vector<SparseVector> transform(const TfidfModel& model, std::span<const Tokens> docs);

}  // namespace aitd

#endif  // AITD_TFIDF_HPP_
