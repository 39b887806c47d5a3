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

#include "aitd/logreg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "aitd/error.hpp"
#include "aitd/parallel.hpp"
#include "aitd/rng.hpp"

namespace aitd::logreg {

std::string_view to_string(Penalty p) { return p == Penalty::kL1 ? "l1" : "l2"; }

Penalty parse_penalty(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "l1") return Penalty::kL1;
  if (lower == "l2") return Penalty::kL2;
  throw InputError("unknown penalty '" + std::string(name) + "' (expected l1 or l2)");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

void check_shapes(const Model& model, std::span<const SparseVector> X, std::span<const int> y) {
  if (X.size() != y.size()) {
    throw std::invalid_argument(
        fmt::format("feature rows ({}) and labels ({}) differ in length", X.size(), y.size()));
  }
  if (X.empty()) throw std::invalid_argument("logistic regression needs at least one sample");
  for (const auto& row : X) {
    if (row.dim != model.dim()) {
      throw std::invalid_argument(fmt::format(
          "feature dimension {} does not match model dimension {}", row.dim, model.dim()));
    }
  }
}

double penalty_value(const Model& model) {
  double r = 0.0;
  if (model.penalty == Penalty::kL2) {
    for (double w : model.weights) r += w * w;
    r *= 0.5;
  } else {
    for (double w : model.weights) r += std::abs(w);
  }
  return r;
}

double objective(const Model& model, std::span<const SparseVector> X, std::span<const int> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double p =
        std::clamp(sigmoid(X[i].dot(model.weights) + model.bias), kProbClamp, 1.0 - kProbClamp);
    sum += y[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  const double n = static_cast<double>(X.size());
  return sum / n + penalty_value(model) / (n * model.C);
}

void check_two_classes(std::span<const int> y, std::string_view what) {
  const auto ones = std::count(y.begin(), y.end(), 1);
  if (y.size() < 2 || ones == 0 || ones == static_cast<std::ptrdiff_t>(y.size())) {
    throw DegenerateDataError(fmt::format("{} must contain both classes", what));
  }
}

}  // namespace

double loss(const Model& model, std::span<const SparseVector> X, std::span<const int> y) {
  check_shapes(model, X, y);
  return objective(model, X, y);
}

Gradient gradient(const Model& model, std::span<const SparseVector> X,
                  std::span<const int> y) {
  check_shapes(model, X, y);
  const double n = static_cast<double>(X.size());
  Gradient g;
  g.weights.assign(model.dim(), 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double residual = sigmoid(X[i].dot(model.weights) + model.bias) - y[i];
    g.bias += residual;
    const auto& row = X[i];
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
      g.weights[row.indices[k]] += residual * row.values[k];
    }
  }
  g.bias /= n;
  const double reg = model.penalty == Penalty::kL2 ? 1.0 / (n * model.C) : 0.0;
  for (std::size_t j = 0; j < g.weights.size(); ++j) {
    g.weights[j] = g.weights[j] / n + reg * model.weights[j];
  }
  return g;
}

void soft_threshold(std::span<double> weights, double threshold) {
  for (double& w : weights) {
    if (std::abs(w) <= threshold) {
      w = 0.0;
    } else {
      w -= std::copysign(threshold, w);
    }
  }
}

Model train(std::span<const SparseVector> X, std::span<const int> y, const TrainConfig& config) {
  if (!(config.C > 0.0)) throw std::invalid_argument("C must be positive");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(config.step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  if (X.size() != y.size()) throw std::invalid_argument("feature/label length mismatch");
  check_two_classes(y, "training data");

  Model model;
  model.penalty = config.penalty;
  model.C = config.C;
  model.weights.assign(X.front().dim, 0.0);
  check_shapes(model, X, y);

  const double n = static_cast<double>(X.size());
  double current = objective(model, X, y);
  model.meta.loss_trace.push_back(current);
  double step = config.step_size;

  Model candidate = model;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const Gradient g = gradient(model, X, y);
    double cand_loss = 0.0;
    bool stalled = false;
    for (;;) {
      for (std::size_t j = 0; j < model.weights.size(); ++j) {
        candidate.weights[j] = model.weights[j] - step * g.weights[j];
      }
      candidate.bias = model.bias - step * g.bias;
      if (config.penalty == Penalty::kL1) {
        soft_threshold(candidate.weights, step / (n * config.C));
      }
      cand_loss = objective(candidate, X, y);
      if (cand_loss <= current) break;
      step *= 0.5;
      if (step < 1e-30) {
        stalled = true;
        break;
      }
    }
    if (stalled) break;

    double delta = std::abs(candidate.bias - model.bias);
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
      delta = std::max(delta, std::abs(candidate.weights[j] - model.weights[j]));
    }
    std::swap(model.weights, candidate.weights);
    model.bias = candidate.bias;
    current = cand_loss;
    model.meta.iterations = iter;
    model.meta.loss_trace.push_back(current);
    if (delta < config.tolerance) break;
  }
  model.meta.final_loss = current;
  return model;
}

std::vector<double> predict_proba(const Model& model, std::span<const SparseVector> X) {
  std::vector<double> out;
  out.reserve(X.size());
  for (const auto& row : X) {
    if (row.dim != model.dim()) {
      throw std::invalid_argument(fmt::format(
          "feature dimension {} does not match model dimension {}", row.dim, model.dim()));
    }
    out.push_back(sigmoid(row.dot(model.weights) + model.bias));
  }
  return out;
}

std::vector<int> predict(const Model& model, std::span<const SparseVector> X, double threshold) {
  std::vector<int> labels;
  for (double p : predict_proba(model, X)) labels.push_back(p >= threshold ? 1 : 0);
  return labels;
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k-fold needs k >= 2");
  if (k > n) throw std::invalid_argument(fmt::format("k-fold with k={} > n={}", k, n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, RngStream::kFolds);
  rng.shuffle(std::span(order));

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

std::vector<GridPoint> Grid::points() const {
  std::vector<GridPoint> out;
  for (std::size_t mf : max_features) {
    for (double c : C) {
      for (Penalty p : penalties) out.push_back({mf, c, p});
    }
  }
  return out;
}

Grid paper_grid() {
  return Grid{{15000, 25000, 35000}, {0.1, 1.0, 10.0}, {Penalty::kL1, Penalty::kL2}};
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size() || y_true.empty()) {
    throw std::invalid_argument("accuracy needs equal, non-zero lengths");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

namespace {

// True when `a` should replace `b` as the winner.
bool beats(const CvRow& a, const CvRow& b) {
  if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
  if (a.point.max_features != b.point.max_features) {
    return a.point.max_features < b.point.max_features;
  }
  if (a.point.C != b.point.C) return a.point.C > b.point.C;
  return a.point.penalty == Penalty::kL2 && b.point.penalty == Penalty::kL1;
}

template <typename T>
std::vector<T> gather(std::span<const T> all, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace

GridSearchResult grid_search_cv(std::span<const Tokens> docs, std::span<const int> labels,
                                const Grid& grid, const CvOptions& options) {
  if (docs.size() != labels.size()) {
    throw std::invalid_argument("documents and labels differ in length");
  }
  const std::vector<GridPoint> points = grid.points();
  if (points.empty()) throw std::invalid_argument("grid search needs a non-empty grid");
  check_two_classes(labels, "training data");

  const auto folds = kfold_indices(docs.size(), options.folds, options.seed);
  const std::size_t k = folds.size();
  std::vector<std::vector<std::size_t>> train_idx(k);
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) train_idx[f].insert(train_idx[f].end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_idx[f].begin(), train_idx[f].end());
    const auto y = gather(labels, std::span<const std::size_t>(train_idx[f]));
    check_two_classes(y, fmt::format("cross-validation fold {} training portion", f + 1));
  }

  std::vector<CvRow> table(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    table[p].point = points[p];
    table[p].fold_accuracy.assign(k, 0.0);
  }

  // One work item per (fold, vocabulary size): the TF-IDF fit is shared by
  // every (C, penalty) pair at that size.
  const std::vector<std::size_t>& sizes = grid.max_features;
  const std::size_t items = k * sizes.size();
  std::mutex observer_mutex;
  parallel_chunks(items, options.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t item = begin; item < end; ++item) {
      const std::size_t f = item / sizes.size();
      const std::size_t mf = sizes[item % sizes.size()];
      if (options.on_fold_fit) {
        std::lock_guard lock(observer_mutex);
        options.on_fold_fit(f, train_idx[f]);
      }
      const auto fit_docs = gather(docs, std::span<const std::size_t>(train_idx[f]));
      const auto fit_y = gather(labels, std::span<const std::size_t>(train_idx[f]));
      const auto held_docs = gather(docs, std::span<const std::size_t>(folds[f]));
      const auto held_y = gather(labels, std::span<const std::size_t>(folds[f]));

      const TfidfModel tfidf = fit_tfidf(fit_docs, mf);
      const auto X_fit = transform(tfidf, fit_docs);
      const auto X_held = transform(tfidf, held_docs);
      for (std::size_t p = 0; p < points.size(); ++p) {
        if (points[p].max_features != mf) continue;
        TrainConfig cfg = options.base;
        cfg.C = points[p].C;
        cfg.penalty = points[p].penalty;
        const Model m = train(X_fit, fit_y, cfg);
        table[p].fold_accuracy[f] = accuracy(held_y, predict(m, X_held));
      }
    }
  });

  for (auto& row : table) {
    row.mean_accuracy = std::accumulate(row.fold_accuracy.begin(), row.fold_accuracy.end(), 0.0) /
                        static_cast<double>(k);
  }
  std::size_t best = 0;
  for (std::size_t p = 1; p < table.size(); ++p) {
    if (beats(table[p], table[best])) best = p;
  }

  GridSearchResult result;
  result.best = table[best].point;
  result.best_config = options.base;
  result.best_config.C = result.best.C;
  result.best_config.penalty = result.best.penalty;
  result.featurizer = fit_tfidf(docs, result.best.max_features);
  const auto X_all = transform(result.featurizer, docs);
  result.model = train(X_all, labels, result.best_config);
  result.table = std::move(table);
  return result;
}

std::string cv_table_csv(std::span<const CvRow> table) {
  std::string out = "max_features,C,penalty";
  const std::size_t k = table.empty() ? 0 : table.front().fold_accuracy.size();
  for (std::size_t f = 0; f < k; ++f) out += fmt::format(",fold{}", f + 1);
  out += ",mean\n";
  for (const auto& row : table) {
    out += fmt::format("{},{},{}", row.point.max_features, row.point.C,
                       to_string(row.point.penalty));
    for (double a : row.fold_accuracy) out += fmt::format(",{}", a);
    out += fmt::format(",{}\n", row.mean_accuracy);
  }
  return out;
}

}  // namespace aitd::logreg
