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

#include "aitd/corpus.hpp"
#include "aitd/error.hpp"
#include "fixtures.hpp"

namespace aitd {
namespace {

using fixtures::TempDir;
using fixtures::write_file;

TEST(LoadJsonl, MapsFields) {
  TempDir dir;
  write_file(dir / "a.jsonl",
             R"({"id":"a1","text":"hello world","label":0,"source":"HC3_finance"})" "\n");
  const Corpus c = load_jsonl(dir / "a.jsonl");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (Record{"a1", "hello world", Label::kHuman, "HC3_finance"}));
}

TEST(LoadJsonl, MissingTextNamesLine) {
  TempDir dir;
  write_file(dir / "a.jsonl",
             "{\"id\":\"a\",\"text\":\"x\",\"label\":1,\"source\":\"s\"}\n"
             "{\"id\":\"b\",\"label\":1,\"source\":\"s\"}\n");
  try {
    load_jsonl(dir / "a.jsonl");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
}

TEST(LoadJsonl, DuplicateIdRejected) {
  TempDir dir;
  write_file(dir / "a.jsonl",
             "{\"id\":\"a\",\"text\":\"x\",\"label\":1,\"source\":\"s\"}\n"
             "{\"id\":\"a\",\"text\":\"y\",\"label\":0,\"source\":\"s\"}\n");
  EXPECT_THROW(load_jsonl(dir / "a.jsonl"), InputError);
}

TEST(LoadJsonl, NullTextIsDroppedByClean) {
  TempDir dir;
  write_file(dir / "a.jsonl",
             "{\"id\":\"a\",\"text\":null,\"label\":1,\"source\":\"s\"}\n"
             "{\"id\":\"b\",\"text\":\"kept\",\"label\":0,\"source\":\"s\"}\n");
  const CleanResult r = clean(load_jsonl(dir / "a.jsonl"));
  EXPECT_EQ(r.dropped, 1u);
  ASSERT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.corpus[0].id, "b");
}

TEST(LoadJsonl, SameFileTwiceIsIdentical) {
  TempDir dir;
  const Corpus src = fixtures::token_order_corpus(50, 8, 3, 4);
  save_jsonl(src, dir / "c.jsonl");
  EXPECT_EQ(load_jsonl(dir / "c.jsonl"), load_jsonl(dir / "c.jsonl"));
  EXPECT_EQ(load_jsonl(dir / "c.jsonl"), src);
}

TEST(LoadCsv, MappedColumns) {
  TempDir dir;
  write_file(dir / "d.csv",
             "essay,generated,prompt\n"
             "\"First, essay\",0,Car-free cities\n"
             "\"Say \"\"hi\"\"\nthere\",1,Exploring Venus\n");
  CsvColumnMap map;
  map.text = "essay";
  map.label = "generated";
  map.source = "prompt";
  map.source_prefix = "DAIGT_v2_";
  const Corpus c = load_csv(dir / "d.csv", map);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].text, "First, essay");
  EXPECT_EQ(c[0].label, Label::kHuman);
  EXPECT_EQ(c[0].source, "DAIGT_v2_Car-free cities");
  EXPECT_EQ(c[1].text, "Say \"hi\"\nthere");
  EXPECT_EQ(c[1].label, Label::kAi);
}

TEST(LoadCsv, UnbalancedQuoteReportsRow) {
  TempDir dir;
  write_file(dir / "d.csv", "text,label,source\nok,0,s\n\"broken,1,s\n");
  try {
    load_csv(dir / "d.csv", {});
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST(ParseLabel, AcceptedSpellings) {
  for (const char* s : {"0", "0.0", "human", "false", "no"}) EXPECT_EQ(parse_label(s), Label::kHuman) << s;
  for (const char* s : {"1", "1.0", "ai", "true", "yes"}) EXPECT_EQ(parse_label(s), Label::kAi) << s;
  EXPECT_FALSE(parse_label("2").has_value());
  EXPECT_FALSE(parse_label("").has_value());
}

TEST(Concat, RenamesCollidingIds) {
  Corpus a, b;
  a.add({"x", "one", Label::kHuman, "s"});
  b.add({"x", "two", Label::kAi, "s"});
  std::vector<std::string> collided;
  const std::vector<Corpus> parts = {a, b};
  const Corpus m = concat(parts, &collided);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[1].id, "x#2");
  EXPECT_EQ(collided, std::vector<std::string>{"x"});
}

TEST(Clean, TrimsAndDropsEmpty) {
  Corpus c;
  c.add({"1", " hi ", Label::kHuman, "s"});
  c.add({"2", "", Label::kAi, "s"});
  c.add({"3", "ok", Label::kAi, "s"});
  const CleanResult r = clean(c);
  ASSERT_EQ(r.corpus.size(), 2u);
  EXPECT_EQ(r.corpus[0].text, "hi");
  EXPECT_EQ(r.corpus[1].text, "ok");
  EXPECT_EQ(r.dropped, 1u);
}

TEST(Clean, NormalisesCrlf) {
  Corpus c;
  c.add({"1", "a\r\nb", Label::kHuman, "s"});
  EXPECT_EQ(clean(c).corpus[0].text, "a\nb");
}

TEST(Clean, Idempotent) {
  Corpus c;
  c.add({"1", "  a\r\nb\t", Label::kHuman, "s"});
  c.add({"2", " \n ", Label::kAi, "s"});
  c.add({"3", "x\r\n", Label::kAi, "t"});
  const Corpus once = clean(c).corpus;
  const CleanResult twice = clean(once);
  EXPECT_EQ(twice.corpus, once);
  EXPECT_EQ(twice.dropped, 0u);
}

TEST(Stats, BalancedRatios) {
  Corpus c;
  c.add({"1", "a", Label::kHuman, "s"});
  c.add({"2", "b", Label::kHuman, "t"});
  c.add({"3", "c", Label::kAi, "s"});
  c.add({"4", "d", Label::kAi, "t"});
  const CorpusStats s = stats(c);
  EXPECT_DOUBLE_EQ(s.overall.human_ratio(), 0.5);
  EXPECT_DOUBLE_EQ(s.overall.ai_ratio(), 0.5);
}

TEST(Stats, EmptyCorpus) {
  const CorpusStats s = stats(Corpus{});
  EXPECT_EQ(s.overall.total, 0u);
  EXPECT_EQ(s.overall.human, 0u);
  EXPECT_EQ(s.overall.ai, 0u);
  EXPECT_TRUE(s.per_source.empty());
}

TEST(Stats, CountsSumToTotal) {
  const Corpus c = fixtures::paper_count_corpus();
  const CorpusStats s = stats(c);
  std::size_t by_source = 0;
  for (const auto& [src, counts] : s.per_source) {
    by_source += counts.total;
    EXPECT_EQ(counts.human + counts.ai, counts.total) << src;
  }
  EXPECT_EQ(by_source, c.size());
  EXPECT_EQ(s.overall.human + s.overall.ai, c.size());
  EXPECT_EQ(s.per_source.size(), 20u);
  EXPECT_EQ(c.size(), 124195u);
}

}  // namespace
}  // namespace aitd
