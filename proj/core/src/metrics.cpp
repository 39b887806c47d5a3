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

#include "aitd/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "aitd/error.hpp"

namespace aitd::metrics {

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument(fmt::format("confusion: {} labels vs {} predictions",
                                            y_true.size(), y_pred.size()));
  }
  if (y_true.empty()) throw std::invalid_argument("confusion: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw std::invalid_argument(fmt::format("confusion: non-binary value at index {}", i));
    }
    if (t == 1) {
      ++(p == 1 ? cm.tp : cm.fn);
    } else {
      ++(p == 1 ? cm.fp : cm.tn);
    }
  }
  return cm;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassScores positive_scores(const ConfusionMatrix& cm) {
  ClassScores s;
  s.precision = ratio(cm.tp, cm.tp + cm.fp);
  s.recall = ratio(cm.tp, cm.tp + cm.fn);
  const double denom = s.precision + s.recall;
  s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
  return s;
}

struct ScoredLabel {
  double score;
  int label;
};

std::vector<ScoredLabel> sorted_desc(std::span<const int> y_true, std::span<const double> scores,
                                     std::uint64_t& positives, std::uint64_t& negatives) {
  if (y_true.size() != scores.size()) {
    throw std::invalid_argument("labels and scores differ in length");
  }
  std::vector<ScoredLabel> items;
  items.reserve(scores.size());
  positives = negatives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw std::invalid_argument("NaN score");
    if (y_true[i] != 0 && y_true[i] != 1) throw std::invalid_argument("non-binary label");
    items.push_back({scores[i], y_true[i]});
    ++(y_true[i] == 1 ? positives : negatives);
  }
  if (positives == 0 || negatives == 0) {
    throw DegenerateDataError("ROC/AUC needs both classes present");
  }
  std::sort(items.begin(), items.end(),
            [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });
  return items;
}

}  // namespace

PrfReport prf(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("prf: empty confusion matrix");
  PrfReport r;
  r.ai = positive_scores(cm);
  r.human = positive_scores(cm.swapped());
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  return r;
}

double auc(std::span<const int> y_true, std::span<const double> scores) {
  std::uint64_t pos = 0, neg = 0;
  const auto items = sorted_desc(y_true, scores, pos, neg);
  // Twice the Mann-Whitney U statistic, counted from the top score down: each
  // positive beats every negative below its tie group and splits its own group.
  std::uint64_t twice_u = 0;
  std::uint64_t neg_above = 0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::uint64_t group_pos = 0, group_neg = 0;
    while (j < items.size() && items[j].score == items[i].score) {
      ++(items[j].label == 1 ? group_pos : group_neg);
      ++j;
    }
    const std::uint64_t neg_below = neg - neg_above - group_neg;
    twice_u += 2 * group_pos * neg_below + group_pos * group_neg;
    neg_above += group_neg;
    i = j;
  }
  const std::uint64_t twice_pairs = 2 * pos * neg;
  return static_cast<double>(static_cast<long double>(twice_u) /
                             static_cast<long double>(twice_pairs));
}

RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
  std::uint64_t pos = 0, neg = 0;
  const auto items = sorted_desc(y_true, scores, pos, neg);
  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::uint64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < items.size();) {
    const double threshold = items[i].score;
    while (i < items.size() && items[i].score == threshold) {
      ++(items[i].label == 1 ? tp : fp);
      ++i;
    }
    curve.points.push_back({threshold, ratio(fp, neg), ratio(tp, pos)});
  }
  curve.auc = auc(y_true, scores);
  return curve;
}

double trapezoid_area(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

double overfit_gap(double train_acc, double test_acc) {
  const double raw = (train_acc - test_acc) * 100.0;
  return std::round(raw * 1e9) / 1e9;
}

}  // namespace aitd::metrics
