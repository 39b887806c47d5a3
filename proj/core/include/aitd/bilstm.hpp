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

#ifndef AITD_BILSTM_HPP_
#define AITD_BILSTM_HPP_

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aitd/rng.hpp"
#include "aitd/textproc.hpp"

namespace aitd::bilstm {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct Dims {
  std::size_t vocab = 30000;
  std::size_t embed = 128;
  std::size_t hidden = 64;
  std::size_t dense = 128;  // fc1 width, 2 * hidden by convention

  static Dims for_hidden(std::size_t vocab, std::size_t embed, std::size_t hidden) {
    return {vocab, embed, hidden, 2 * hidden};
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

// One LSTM direction. Gate rows are stacked [input, forget, cell, output].
struct LstmBlock {
  Matrix W;  // 4H x E
  Matrix U;  // 4H x H
  Vector b;  // 4H
};

// Every trainable tensor. Gradients and Adam moments use the same layout.
struct Params {
  Matrix embedding;  // V x E, row 0 (PAD) stays zero
  LstmBlock fwd;
  LstmBlock bwd;
  Matrix fc1_w;  // D x 2H
  Vector fc1_b;  // D
  Vector fc2_w;  // D
  Vector fc2_b;  // 1

  static Params zeros(const Dims& dims);

  // Tensors in serialization order: embedding, fwd.{W,U,b}, bwd.{W,U,b},
  // fc1.{w,b}, fc2.{w,b}. Matrices are row-major.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  std::size_t parameter_count() const;

  void set_zero();
  void add_scaled(const Params& other, double scale);
};

struct Model {
  Dims dims;
  Params params;
};

// Uniform(+-1/sqrt(H)) for LSTM weights, uniform(+-1/sqrt(fan_in)) for dense
// weights, forget-gate bias 1, other biases 0, embedding rows N(0, 0.1) except
// the zero PAD row. Draws come from the init stream of `seed`.
Model init_weights(const Dims& dims, std::uint64_t seed);

struct CellState {
  Vector h;
  Vector c;
};

// Everything a cell step produces, kept for backpropagation.
struct StepCache {
  std::int32_t id = 0;
  Vector h_prev, c_prev;
  Vector i, f, g, o;
  Vector c, tanh_c, h;
};

StepCache lstm_step(const Eigen::Ref<const Vector>& x, const Vector& h_prev,
                    const Vector& c_prev, const LstmBlock& block);

CellState lstm_cell(const Eigen::Ref<const Vector>& x, const Vector& h_prev,
                    const Vector& c_prev, const LstmBlock& block);

enum class Mode { kTrain, kEval };

// Inverted dropout. Identity in eval mode or at rate 0. Throws
// std::invalid_argument unless rate lies in [0, 1).
Vector dropout(const Vector& v, double rate, Rng& rng, Mode mode);
// The keep/scale mask dropout() multiplies by.
Vector dropout_mask(std::size_t size, double rate, Rng& rng, Mode mode);

struct ForwardCache {
  std::vector<StepCache> fwd;  // t = 0 .. length-1
  std::vector<StepCache> bwd;  // t = length-1 .. 0, in processing order
  Vector rep;                  // [h_fwd(last); h_bwd(first)], 2H
  Vector z1;                   // fc1 pre-activation
  Vector mask;                 // dropout mask, ones in eval mode
  Vector dropped;              // relu(z1) .* mask
  double logit = 0.0;
  double probability = 0.5;
};

// Runs both directions over the first `length` ids only; PAD positions never
// enter the recurrences. `rng` is used for dropout in train mode and may be
// null in eval mode. Throws std::out_of_range for ids outside [0, V).
ForwardCache forward(std::span<const std::int32_t> ids, std::size_t length, const Model& model,
                     Mode mode, Rng* rng, double dropout_rate = 0.0);

double predict_proba(std::span<const std::int32_t> ids, std::size_t length, const Model& model);

// BCE of sigmoid(logit) against label, computed from the logit for stability.
double bce_from_logit(double logit, int label);

// Adds scale * dBCE/dparam into `grads` (which must have the model's layout).
// The PAD embedding row of `grads` is left at zero.
void backward(const ForwardCache& cache, int label, const Model& model, Params& grads,
              double scale = 1.0);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;
};

// One bias-corrected Adam update of a flat tensor. State vectors are sized on
// first use.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& config);

class Adam {
 public:
  explicit Adam(AdamConfig config) : config_(config) {}
  void step(Params& params, const Params& grads);

 private:
  AdamConfig config_;
  std::vector<AdamState> states_;
};

struct Example {
  std::vector<std::int32_t> ids;
  std::size_t length = 0;
  int label = 0;
};

// Tokenize (no stop-word removal), encode against a special-reserving vocab.
Example make_example(std::string_view text, int label, const Vocab& vocab, std::size_t max_len);

struct NetTrainConfig {
  std::size_t hidden = 64;
  std::size_t embed = 128;
  double dropout = 0.2;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  int max_epochs = 15;
  int patience = 3;
  std::uint64_t seed = 42;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t threads = 1;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int stopped_epoch = 0;
  int best_epoch = 0;
};

// Patience-based stopping on a score that should increase. An epoch improves
// only if it beats the best score strictly, so ties keep the earliest epoch.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Returns true when `score` is a new best.
  bool observe(int epoch, double score);
  bool should_stop() const { return stale_epochs_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_score() const { return best_score_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  double best_score_ = 0.0;
  int stale_epochs_ = 0;
};

// Epoch loop shared by training and tests: calls run_epoch(epoch) for epoch =
// 1..max_epochs, calls save_checkpoint(epoch) whenever val accuracy improves,
// and stops once `patience` consecutive epochs fail to improve.
TrainHistory drive_epochs(int max_epochs, int patience,
                          const std::function<EpochRecord(int)>& run_epoch,
                          const std::function<void(int)>& save_checkpoint);

struct TrainResult {
  Model model;  // parameters from best_epoch
  TrainHistory history;
};

// Mini-batch Adam with per-epoch seeded shuffling, eval-mode validation after
// each epoch and early stopping on validation accuracy. Throws
// DegenerateDataError for a single-class training set or empty validation set.
TrainResult train(std::span<const Example> train_set, std::span<const Example> val_set,
                  std::size_t vocab_size, const NetTrainConfig& config);

struct EvalResult {
  std::vector<double> probabilities;
  double mean_loss = 0.0;
  double accuracy = 0.0;
};

EvalResult evaluate(const Model& model, std::span<const Example> examples,
                    std::size_t threads = 1);

// {64,128,256} units x {0.2,0.3,0.5} dropout x {128,256} batch x {5e-4,1e-3}
// learning rate, other fields copied from `base`.
std::vector<NetTrainConfig> paper_grid(const NetTrainConfig& base);

struct GridRow {
  NetTrainConfig config;
  double best_val_accuracy = 0.0;
  int best_epoch = 0;
  int stopped_epoch = 0;
};

struct GridResult {
  std::vector<GridRow> rows;
  std::size_t best = 0;  // highest val accuracy, earliest config on ties
  TrainResult winner;
};

GridResult grid_search(std::span<const Example> train_set, std::span<const Example> val_set,
                       std::size_t vocab_size, std::span<const NetTrainConfig> configs);

// epoch,train_loss,val_loss,val_acc
std::string history_csv(const TrainHistory& history);
// hidden,dropout,batch_size,learning_rate,best_val_acc,best_epoch,stopped_epoch
std::string grid_csv(std::span<const GridRow> rows);

}  // namespace aitd::bilstm

#endif  // AITD_BILSTM_HPP_
