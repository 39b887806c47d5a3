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

// Brute-force reference implementations used as test oracles. Nothing here
// calls into the library's numeric code; each routine recomputes its answer
// from the textbook definition with plain loops.

#ifndef AITD_TESTS_SUPPORT_ORACLES_HPP_
#define AITD_TESTS_SUPPORT_ORACLES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aitd/bilstm.hpp"
#include "aitd/textproc.hpp"

namespace aitd::oracle {

// Vocabulary by sorting every occurrence, run-length counting, then a stable
// sort on count. Returns terms in rank order.
std::vector<std::string> sorted_vocab(std::span<const Tokens> docs, std::size_t max_size);

struct DenseTfidf {
  std::vector<std::string> terms;
  std::vector<double> idf;
};

DenseTfidf dense_tfidf_fit(std::span<const Tokens> docs, std::size_t max_features);
std::vector<double> dense_tfidf_row(const DenseTfidf& model, const Tokens& doc);

// P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs.
double pairwise_auc(std::span<const int> y, std::span<const double> scores);

// Mean clamped BCE plus penalty over a dense design matrix.
double logreg_objective(const std::vector<double>& w, double b,
                        const std::vector<std::vector<double>>& X, std::span<const int> y,
                        double C, bool l1);

// Central difference of f at x[i] with step h; x is restored afterwards.
double central_difference(const std::function<double()>& f, double& x, double h);

// Relative error |a - n| / max(|a|, |n|), or the absolute error when both
// magnitudes are below `floor`.
double relative_error(double analytic, double numeric, double floor = 1e-7);

struct ScalarLstmStep {
  std::vector<double> i, f, g, o, c, h;
};

// One LSTM step computed entry by entry from the [i,f,g,o] row layout.
ScalarLstmStep scalar_lstm_step(const std::vector<double>& x, const std::vector<double>& h_prev,
                                const std::vector<double>& c_prev,
                                const bilstm::LstmBlock& block);

// Full-trace forward pass of the bidirectional classifier with scalar loops.
// Returns the logit.
double scalar_bilstm_logit(std::span<const std::int32_t> ids, std::size_t length,
                           const bilstm::Model& model);

struct SplitOptimum {
  std::vector<int> assignment;  // partition index per topic
  double deviation = 0.0;       // L1 distance between realised and target fractions
};

double split_deviation(std::span<const std::size_t> sizes, std::span<const int> assignment,
                       const std::array<double, 3>& targets);

// Enumerates all 3^k assignments with three non-empty partitions.
SplitOptimum exhaustive_split(std::span<const std::size_t> sizes,
                              const std::array<double, 3>& targets);

struct AdamTrace {
  std::vector<double> m, v, theta;
};

// Scalar Adam with bias correction, one entry per step.
AdamTrace adam_scalar_trace(double theta0, std::span<const double> grads, double lr, double beta1,
                            double beta2, double eps);

}  // namespace aitd::oracle

#endif  // AITD_TESTS_SUPPORT_ORACLES_HPP_
