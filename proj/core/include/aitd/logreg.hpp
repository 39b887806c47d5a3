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

#ifndef AITD_LOGREG_HPP_
#define AITD_LOGREG_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aitd/textproc.hpp"
#include "aitd/tfidf.hpp"

namespace aitd::logreg {

enum class Penalty { kL1, kL2 };

std::string_view to_string(Penalty p);
Penalty parse_penalty(std::string_view name);  // "l1"/"l2", case-insensitive

// Full-batch gradient descent settings. The step starts at step_size and is
// halved whenever a candidate step would increase the objective.
struct TrainConfig {
  Penalty penalty = Penalty::kL2;
  double C = 1.0;
  int max_iters = 500;
  double step_size = 1.0;
  double tolerance = 1e-6;
  std::uint64_t seed = 42;
};

struct TrainingMeta {
  int iterations = 0;
  double final_loss = 0.0;
  // Objective after every accepted step, starting with the initial value.
  std::vector<double> loss_trace;
};

struct Model {
  std::vector<double> weights;
  double bias = 0.0;
  Penalty penalty = Penalty::kL2;
  double C = 1.0;
  TrainingMeta meta;

  std::size_t dim() const { return weights.size(); }
};

inline constexpr double kProbClamp = 1e-12;

// Numerically stable logistic function.
double sigmoid(double z);

// Mean BCE (probabilities clamped to [1e-12, 1 - 1e-12]) plus R / (n C) with
// R = 0.5 ||w||^2 (L2) or ||w||_1 (L1). The bias is not penalised.
double loss(const Model& model, std::span<const SparseVector> X, std::span<const int> y);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};

// Gradient of the smooth part: (1/n) X^T (p - y), plus w / (n C) for L2.
Gradient gradient(const Model& model, std::span<const SparseVector> X,
                  std::span<const int> y);

// Soft-thresholding prox: shrinks every weight towards 0 by `threshold`.
void soft_threshold(std::span<double> weights, double threshold);

// Starts from w = 0, b = 0. Throws DegenerateDataError when y holds a single
// class or fewer than two samples.
Model train(std::span<const SparseVector> X, std::span<const int> y,
            const TrainConfig& config);

std::vector<double> predict_proba(const Model& model, std::span<const SparseVector> X);
// label = [p >= threshold]; p = 0.5 is the AI class at the default threshold.
std::vector<int> predict(const Model& model, std::span<const SparseVector> X,
                         double threshold = 0.5);

// Seeded Fisher-Yates shuffle of 0..n-1 cut into k contiguous folds whose
// sizes differ by at most one (larger folds first).
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed);

struct GridPoint {
  std::size_t max_features = 0;
  double C = 1.0;
  Penalty penalty = Penalty::kL2;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct Grid {
  std::vector<std::size_t> max_features;
  std::vector<double> C;
  std::vector<Penalty> penalties;

  // Cartesian product ordered max_features, then C, then penalty.
  std::vector<GridPoint> points() const;
};

// {15000, 25000, 35000} x {0.1, 1, 10} x {L1, L2}.
Grid paper_grid();

struct CvRow {
  GridPoint point;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

struct CvOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  // Optimiser settings; penalty and C are overridden per grid point.
  TrainConfig base;
  std::size_t threads = 1;
  // Called with (fold, training-document indices) before each fold's TF-IDF
  // fit. Lets callers check that held-out documents never reach the fit.
  std::function<void(std::size_t, std::span<const std::size_t>)> on_fold_fit;
};

struct GridSearchResult {
  GridPoint best;
  TrainConfig best_config;
  TfidfModel featurizer;  // refit on all training documents
  Model model;            // refit on all training documents
  std::vector<CvRow> table;  // grid order
};

// Winner = highest mean fold accuracy; ties go to the smaller max_features,
// then the larger C, then L2 before L1. Throws DegenerateDataError when a
// fold's training portion holds a single class.
GridSearchResult grid_search_cv(std::span<const Tokens> docs, std::span<const int> labels,
                                const Grid& grid, const CvOptions& options);

// max_features,C,penalty,fold1..foldk,mean
std::string cv_table_csv(std::span<const CvRow> table);

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

}  // namespace aitd::logreg

#endif  // AITD_LOGREG_HPP_
