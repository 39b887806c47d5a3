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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "aitd/bilstm.hpp"
#include "aitd/logreg.hpp"
#include "aitd/metrics.hpp"
#include "aitd/rng.hpp"
#include "aitd/textproc.hpp"
#include "aitd/tfidf.hpp"

namespace {

std::vector<aitd::Tokens> make_docs(std::size_t n, std::size_t len, std::uint64_t seed) {
  aitd::Rng rng(seed);
  std::vector<aitd::Tokens> docs(n);
  for (auto& doc : docs) {
    aitd::Tokens words;
    for (std::size_t i = 0; i < len; ++i) words.push_back("w" + std::to_string(rng.next_u64() % 2000));
    doc = aitd::ngrams(words, {1, 2});
  }
  return docs;
}

std::vector<int> make_labels(std::size_t n) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 2);
  return y;
}

void BM_Tokenize(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 400; ++i) text += "The quick brown fox, jumping over lazy dogs; ";
  for (auto _ : state) benchmark::DoNotOptimize(aitd::analyze_for_tfidf(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_TfidfFit(benchmark::State& state) {
  const auto docs = make_docs(static_cast<std::size_t>(state.range(0)), 200, 1);
  for (auto _ : state) benchmark::DoNotOptimize(aitd::fit_tfidf(docs, 25000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TfidfFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_TfidfTransform(benchmark::State& state) {
  const auto docs = make_docs(2000, 200, 2);
  const auto model = aitd::fit_tfidf(docs, 25000);
  for (auto _ : state) benchmark::DoNotOptimize(aitd::transform(model, docs));
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_TfidfTransform)->Unit(benchmark::kMillisecond);

void BM_LogregTrain(benchmark::State& state) {
  const auto docs = make_docs(1000, 150, 3);
  const auto model = aitd::fit_tfidf(docs, 15000);
  const auto X = aitd::transform(model, docs);
  const auto y = make_labels(X.size());
  aitd::logreg::TrainConfig config;
  config.penalty = state.range(0) == 1 ? aitd::logreg::Penalty::kL1 : aitd::logreg::Penalty::kL2;
  config.max_iters = 100;
  for (auto _ : state) benchmark::DoNotOptimize(aitd::logreg::train(X, y, config));
}
BENCHMARK(BM_LogregTrain)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_LstmForwardBackward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  const auto dims = aitd::bilstm::Dims::for_hidden(5000, 100, hidden);
  const auto model = aitd::bilstm::init_weights(dims, 42);
  aitd::Rng rng(7);
  std::vector<std::int32_t> ids(600);
  for (auto& id : ids) id = static_cast<std::int32_t>(2 + rng.next_u64() % 4998);
  auto grads = aitd::bilstm::Params::zeros(dims);
  aitd::Rng drop(9);
  for (auto _ : state) {
    const auto cache = aitd::bilstm::forward(ids, ids.size(), model, aitd::bilstm::Mode::kTrain,
                                             &drop, 0.3);
    aitd::bilstm::backward(cache, 1, model, grads);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ids.size()));
}
BENCHMARK(BM_LstmForwardBackward)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Auc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  aitd::Rng rng(11);
  std::vector<double> scores(n);
  for (auto& s : scores) s = rng.uniform();
  const auto y = make_labels(n);
  for (auto _ : state) benchmark::DoNotOptimize(aitd::metrics::auc(y, scores));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auc)->Arg(13311)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
