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

#include "aitd/error.hpp"
#include "aitd/textproc.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace aitd {
namespace {

TEST(Tokenize, FoldsCaseAndSplitsPunctuation) {
  EXPECT_EQ(tokenize("The cat, the CAT!"), (Tokens{"the", "cat", "the", "cat"}));
}

TEST(Tokenize, HyphenSplits) {
  EXPECT_EQ(tokenize("AI-generated text"), (Tokens{"ai", "generated", "text"}));
}

TEST(Tokenize, MinimumLengthTwo) { EXPECT_TRUE(tokenize("a I x").empty()); }

TEST(Tokenize, UnicodeLetters) {
  EXPECT_EQ(tokenize("Élan CAFÉ naïve"), (Tokens{"élan", "café", "naïve"}));
  EXPECT_EQ(tokenize("é x"), Tokens{});
}

TEST(Tokenize, DigitsCount) { EXPECT_EQ(tokenize("covid 19 a1"), (Tokens{"covid", "19", "a1"})); }

TEST(Tokenize, LowercaseInvariant) {
  for (const char* s : {"Hello World", "MiXeD-case TEXT", "ÀÉÎ ok"}) {
    std::string lower;
    for (const auto& t : tokenize(s)) lower += t + " ";
    EXPECT_EQ(tokenize(lower), tokenize(s)) << s;
  }
}

TEST(Stopwords, RemovesListedTerms) {
  const auto& sw = english_stopwords();
  EXPECT_EQ(sw.size(), 179u);
  EXPECT_EQ(remove_stopwords({"the", "cat"}, sw), Tokens{"cat"});
  EXPECT_TRUE(remove_stopwords({"the", "and", "of"}, sw).empty());
  const Tokens plain = {"river", "bread"};
  EXPECT_EQ(remove_stopwords(plain, sw), plain);
  EXPECT_EQ(english_stopwords_sha256().size(), 64u);
}

TEST(Ngrams, UniAndBigrams) {
  EXPECT_EQ(ngrams({"the", "cat", "sat"}, {1, 2}),
            (Tokens{"the", "cat", "sat", "the cat", "cat sat"}));
  EXPECT_EQ(ngrams({"solo"}, {1, 2}), Tokens{"solo"});
  EXPECT_TRUE(ngrams({}, {1, 2}).empty());
  EXPECT_EQ(ngrams({"a1", "b2", "c3"}, {2, 2}), (Tokens{"a1 b2", "b2 c3"}));
}

TEST(BuildVocab, TieBrokenLexicographically) {
  const std::vector<Tokens> docs = {{"b", "b", "b", "a", "a", "a", "c"}};
  const Vocab v = build_vocab(docs, 2, false);
  EXPECT_EQ(v.terms, (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(v.coverage, 6.0 / 7.0);
}

TEST(BuildVocab, MatchesSortOracle) {
  Rng rng(17);
  std::vector<Tokens> docs;
  for (int d = 0; d < 200; ++d) docs.push_back(fixtures::random_doc(rng, 80, rng.below(30)));
  for (std::size_t max_size : {1u, 10u, 50u, 500u}) {
    EXPECT_EQ(build_vocab(docs, max_size, false).terms, oracle::sorted_vocab(docs, max_size));
  }
}

TEST(BuildVocab, SpecialsReserveTwoIds) {
  const std::vector<Tokens> docs = {{"x1", "x1", "y2"}};
  const Vocab v = build_vocab(docs, 10, true);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v.terms[kPadId], "<pad>");
  EXPECT_EQ(v.terms[kUnkId], "<unk>");
  EXPECT_EQ(v.find("x1"), 2);
  EXPECT_EQ(v.find("<pad>"), -1);
}

TEST(BuildVocab, CoverageMonotoneInSize) {
  Rng rng(23);
  std::vector<Tokens> docs;
  for (int d = 0; d < 50; ++d) docs.push_back(fixtures::random_doc(rng, 40, 20));
  double prev = 0.0;
  for (std::size_t n = 1; n <= 45; ++n) {
    const double cov = build_vocab(docs, n, false).coverage;
    EXPECT_GE(cov, prev);
    EXPECT_LE(cov, 1.0);
    prev = cov;
  }
  EXPECT_DOUBLE_EQ(prev, 1.0);
}

TEST(BuildVocab, EmptyCorpusIsDegenerate) {
  const std::vector<Tokens> docs = {{}, {}};
  EXPECT_THROW(build_vocab(docs, 10, false), DegenerateDataError);
}

TEST(Encode, PadsAndTruncates) {
  Vocab v;
  v.specials = true;
  v.terms = {"<pad>", "<unk>", "cat"};
  v.reindex();
  Encoded e = encode({"cat"}, v, 4);
  EXPECT_EQ(e.ids, (std::vector<std::int32_t>{2, 0, 0, 0}));
  EXPECT_EQ(e.length, 1u);

  const Tokens long_doc(700, "cat");
  e = encode(long_doc, v, 600);
  EXPECT_EQ(e.ids.size(), 600u);
  EXPECT_EQ(e.length, 600u);

  e = encode({}, v, 5);
  EXPECT_EQ(e.ids, std::vector<std::int32_t>(5, kPadId));
  EXPECT_EQ(e.length, 0u);

  e = encode({"dog", "cat"}, v, 3);
  EXPECT_EQ(e.ids, (std::vector<std::int32_t>{kUnkId, 2, 0}));
}

TEST(Encode, NoPadBeforeLengthAndIdsInRange) {
  Rng rng(29);
  std::vector<Tokens> docs;
  for (int d = 0; d < 30; ++d) docs.push_back(fixtures::random_doc(rng, 30, rng.below(20)));
  const Vocab v = build_vocab(docs, 12, true);
  for (const auto& d : docs) {
    const Encoded e = encode(d, v, 15);
    for (std::size_t i = 0; i < e.ids.size(); ++i) {
      EXPECT_LT(e.ids[i], static_cast<std::int32_t>(v.size()));
      if (i < e.length) {
        EXPECT_NE(e.ids[i], kPadId);
      } else {
        EXPECT_EQ(e.ids[i], kPadId);
      }
    }
  }
}

TEST(VocabFile, RoundTrip) {
  fixtures::TempDir dir;
  const std::vector<Tokens> docs = {{"alpha", "beta", "beta", "gamma ray"}};
  for (bool specials : {false, true}) {
    const Vocab v = build_vocab(docs, 10, specials);
    save_vocab(v, dir / "v.txt");
    const Vocab back = load_vocab(dir / "v.txt");
    EXPECT_EQ(back.terms, v.terms);
    EXPECT_EQ(back.specials, specials);
    EXPECT_EQ(back.find("beta"), v.find("beta"));
    const std::string text = fixtures::read_file(dir / "v.txt");
    const std::string header = "#vocab v1 size=" + std::to_string(v.size()) +
                               " specials=" + (specials ? "2" : "0") + "\n";
    EXPECT_EQ(text.rfind(header, 0), 0u);
  }
}

}  // namespace
}  // namespace aitd
