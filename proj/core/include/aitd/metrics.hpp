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

#ifndef AITD_METRICS_HPP_
#define AITD_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aitd::metrics {

// AI (label 1) is the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  // The same predictions scored with human as the positive class.
  ConfusionMatrix swapped() const { return {tn, fn, fp, tp}; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct PrfReport {
  ClassScores ai;
  ClassScores human;
  double accuracy = 0.0;
};

// Any 0/0 ratio is defined as 0. Throws std::invalid_argument on an empty
// matrix.
PrfReport prf(const ConfusionMatrix& cm);

// Mann-Whitney AUC: P(score of random positive > score of random negative),
// ties counted one half, evaluated as an exact ratio of integer pair counts.
double auc(std::span<const int> y_true, std::span<const double> scores);

struct RocPoint {
  double threshold;  // +inf for the (0,0) start point
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;  // Mann-Whitney value
};

// One point per distinct score (descending, predicting positive when
// score >= threshold), preceded by the (0,0) point.
RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores);

// Trapezoidal area under the curve's points.
double trapezoid_area(const RocCurve& curve);

// (train_acc - test_acc) * 100, rounded to 1e-9 percentage points so that
// decimal inputs give their decimal difference.
double overfit_gap(double train_acc, double test_acc);

}  // namespace aitd::metrics

#endif  // AITD_METRICS_HPP_
