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

#include <cmath>

#include "aitd/error.hpp"
#include "aitd/tfidf.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace aitd {
namespace {

std::vector<double> densify(const SparseVector& v) {
  std::vector<double> d(v.dim, 0.0);
  for (std::size_t k = 0; k < v.nnz(); ++k) d[v.indices[k]] = v.values[k];
  return d;
}

TEST(FitTfidf, SingleDocIdfIsOne) {
  const std::vector<Tokens> docs = {{"cat"}};
  const TfidfModel m = fit_tfidf(docs, 10);
  ASSERT_EQ(m.dim(), 1u);
  EXPECT_DOUBLE_EQ(m.idf[0], 1.0);
  const SparseVector v = transform(m, Tokens{"cat"});
  ASSERT_EQ(v.nnz(), 1u);
  EXPECT_DOUBLE_EQ(v.values[0], 1.0);
}

TEST(FitTfidf, ClosedFormIdf) {
  const std::vector<Tokens> docs = {{"cat"}, {"cat", "dog"}};
  const TfidfModel m = fit_tfidf(docs, 10);
  EXPECT_DOUBLE_EQ(m.idf[m.vocab.find("cat")], 1.0);
  EXPECT_DOUBLE_EQ(m.idf[m.vocab.find("dog")], std::log(3.0 / 2.0) + 1.0);
}

TEST(FitTfidf, IdfMatchesRecount) {
  Rng rng(31);
  std::vector<Tokens> docs;
  for (int d = 0; d < 20; ++d) docs.push_back(fixtures::random_doc(rng, 25, 1 + rng.below(12)));
  const TfidfModel m = fit_tfidf(docs, 100);
  const auto ref = oracle::dense_tfidf_fit(docs, 100);
  ASSERT_EQ(m.vocab.terms, ref.terms);
  for (std::size_t t = 0; t < ref.idf.size(); ++t) {
    EXPECT_NEAR(m.idf[t], ref.idf[t], 1e-12);
    EXPECT_GE(m.idf[t], 1.0);
  }
}

TEST(Transform, DenseOracle) {
  const std::vector<Tokens> docs = {{"red", "fox", "red"}, {"blue", "fox"}, {"red", "sky", "sky"}};
  const TfidfModel m = fit_tfidf(docs, 50);
  const auto ref = oracle::dense_tfidf_fit(docs, 50);
  const std::vector<Tokens> probes = {
      {"red"}, {"fox", "fox", "sky"}, {"blue", "red", "fox", "sky"}, {"green"}, {"sky", "moon"}};
  for (const auto& p : probes) {
    const auto got = densify(transform(m, p));
    const auto want = oracle::dense_tfidf_row(ref, p);
    for (std::size_t j = 0; j < want.size(); ++j) EXPECT_NEAR(got[j], want[j], 1e-12);
  }
}

TEST(Transform, OovOnlyIsEmpty) {
  const std::vector<Tokens> docs = {{"cat"}};
  const SparseVector v = transform(fit_tfidf(docs, 10), Tokens{"zebra", "yak"});
  EXPECT_EQ(v.nnz(), 0u);
  EXPECT_EQ(v.norm(), 0.0);
}

TEST(Transform, SparseInvariantsAndUnitNorm) {
  Rng rng(37);
  std::vector<Tokens> docs;
  for (int d = 0; d < 40; ++d) docs.push_back(fixtures::random_doc(rng, 50, rng.below(20)));
  docs.push_back({"t01"});
  const TfidfModel m = fit_tfidf(docs, 30);
  for (const auto& v : transform(m, docs)) {
    for (std::size_t k = 0; k < v.nnz(); ++k) {
      EXPECT_LT(v.indices[k], v.dim);
      EXPECT_NE(v.values[k], 0.0);
      if (k) EXPECT_LT(v.indices[k - 1], v.indices[k]);
    }
    if (v.nnz()) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  }
}

TEST(Transform, RepetitionInvariant) {
  Rng rng(41);
  std::vector<Tokens> docs;
  for (int d = 0; d < 15; ++d) docs.push_back(fixtures::random_doc(rng, 20, 1 + rng.below(10)));
  const TfidfModel m = fit_tfidf(docs, 100);
  for (const auto& d : docs) {
    Tokens twice = d;
    twice.insert(twice.end(), d.begin(), d.end());
    const SparseVector a = transform(m, d);
    const SparseVector b = transform(m, twice);
    ASSERT_EQ(a.indices, b.indices);
    for (std::size_t k = 0; k < a.nnz(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-15);
  }
}

TEST(Transform, Deterministic) {
  Rng rng(43);
  std::vector<Tokens> docs;
  for (int d = 0; d < 15; ++d) docs.push_back(fixtures::random_doc(rng, 20, 1 + rng.below(10)));
  const TfidfModel a = fit_tfidf(docs, 12);
  const TfidfModel b = fit_tfidf(docs, 12);
  EXPECT_EQ(a.vocab.terms, b.vocab.terms);
  EXPECT_EQ(a.idf, b.idf);
  EXPECT_EQ(transform(a, docs), transform(b, docs));
}

TEST(FitTfidf, EmptyCorpusRejected) {
  EXPECT_THROW(fit_tfidf(std::vector<Tokens>{}, 10), DegenerateDataError);
}

TEST(SparseVector, DotAndFromDense) {
  const std::vector<double> dense = {0.0, 2.0, 0.0, -1.0};
  const SparseVector v = sparse_from_dense(dense);
  EXPECT_EQ(v.indices, (std::vector<std::uint32_t>{1, 3}));
  EXPECT_EQ(v.dim, 4u);
  const std::vector<double> w = {5.0, 3.0, 7.0, 2.0};
  EXPECT_DOUBLE_EQ(v.dot(w), 4.0);
  EXPECT_DOUBLE_EQ(v.norm(), std::sqrt(5.0));
}

TEST(AnalyzeForTfidf, StopwordsThenBigrams) {
  EXPECT_EQ(analyze_for_tfidf("The cat sat on the mat"),
            (Tokens{"cat", "sat", "mat", "cat sat", "sat mat"}));
}

}  // namespace
}  // namespace aitd
