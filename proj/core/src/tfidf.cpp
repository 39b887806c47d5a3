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

#include "aitd/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "aitd/error.hpp"

namespace aitd {

double SparseVector::dot(std::span<const double> dense) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) acc += values[k] * dense[indices[k]];
  return acc;
}

double SparseVector::norm() const {
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc);
}

SparseVector sparse_from_dense(std::span<const double> dense) {
  SparseVector out;
  out.dim = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      out.indices.push_back(static_cast<std::uint32_t>(i));
      out.values.push_back(dense[i]);
    }
  }
  return out;
}

TfidfModel fit_tfidf(std::span<const Tokens> docs, std::size_t max_features) {
  if (docs.empty()) throw DegenerateDataError("cannot fit TF-IDF on an empty corpus");
  TfidfModel model;
  model.vocab = build_vocab(docs, max_features, /*reserve_special=*/false);
  model.n_docs = docs.size();

  std::vector<std::uint64_t> df(model.vocab.size(), 0);
  std::vector<std::size_t> last_seen(model.vocab.size(), SIZE_MAX);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& term : docs[d]) {
      const std::int32_t id = model.vocab.find(term);
      if (id >= 0 && last_seen[id] != d) {
        last_seen[id] = d;
        ++df[id];
      }
    }
  }
  const double n = static_cast<double>(model.n_docs);
  model.idf.resize(df.size());
  for (std::size_t t = 0; t < df.size(); ++t) {
    model.idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0;
  }
  return model;
}

SparseVector transform(const TfidfModel& model, const Tokens& doc) {
  std::unordered_map<std::uint32_t, std::uint32_t> counts;
  for (const auto& term : doc) {
    const std::int32_t id = model.vocab.find(term);
    if (id >= 0) ++counts[static_cast<std::uint32_t>(id)];
  }
  SparseVector out;
  out.dim = model.dim();
  out.indices.reserve(counts.size());
  for (const auto& [id, _] : counts) out.indices.push_back(id);
  std::sort(out.indices.begin(), out.indices.end());
  out.values.reserve(out.indices.size());
  double sq = 0.0;
  for (std::uint32_t id : out.indices) {
    const double w = static_cast<double>(counts[id]) * model.idf[id];
    out.values.push_back(w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

std::vector<SparseVector> transform(const TfidfModel& model, std::span<const Tokens> docs) {
  std::vector<SparseVector> rows;
  rows.reserve(docs.size());
  for (const auto& doc : docs) rows.push_back(transform(model, doc));
  return rows;
}

}  // namespace aitd
