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

#include "aitd/bilstm.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aitd/error.hpp"
#include "aitd/parallel.hpp"

namespace aitd::bilstm {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Vector sigmoid(const Vector& z) { return z.unaryExpr([](double v) { return sigmoid(v); }); }

LstmBlock zero_block(std::size_t embed, std::size_t hidden) {
  const auto g = static_cast<Eigen::Index>(4 * hidden);
  return {Matrix::Zero(g, static_cast<Eigen::Index>(embed)),
          Matrix::Zero(g, static_cast<Eigen::Index>(hidden)), Vector::Zero(g)};
}

template <typename T>
std::span<T> span_of(T* data, Eigen::Index size) {
  return std::span<T>(data, static_cast<std::size_t>(size));
}

void fill_uniform(Matrix& m, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
}

}  // namespace

Params Params::zeros(const Dims& d) {
  const auto V = static_cast<Eigen::Index>(d.vocab);
  const auto E = static_cast<Eigen::Index>(d.embed);
  const auto H = static_cast<Eigen::Index>(d.hidden);
  const auto D = static_cast<Eigen::Index>(d.dense);
  Params p;
  p.embedding = Matrix::Zero(V, E);
  p.fwd = zero_block(d.embed, d.hidden);
  p.bwd = zero_block(d.embed, d.hidden);
  p.fc1_w = Matrix::Zero(D, 2 * H);
  p.fc1_b = Vector::Zero(D);
  p.fc2_w = Vector::Zero(D);
  p.fc2_b = Vector::Zero(1);
  return p;
}

std::vector<std::span<double>> Params::tensors() {
  return {span_of(embedding.data(), embedding.size()),
          span_of(fwd.W.data(), fwd.W.size()),
          span_of(fwd.U.data(), fwd.U.size()),
          span_of(fwd.b.data(), fwd.b.size()),
          span_of(bwd.W.data(), bwd.W.size()),
          span_of(bwd.U.data(), bwd.U.size()),
          span_of(bwd.b.data(), bwd.b.size()),
          span_of(fc1_w.data(), fc1_w.size()),
          span_of(fc1_b.data(), fc1_b.size()),
          span_of(fc2_w.data(), fc2_w.size()),
          span_of(fc2_b.data(), fc2_b.size())};
}

std::vector<std::span<const double>> Params::tensors() const {
  std::vector<std::span<const double>> out;
  for (auto t : const_cast<Params*>(this)->tensors()) out.emplace_back(t.data(), t.size());
  return out;
}

std::size_t Params::parameter_count() const {
  std::size_t n = 0;
  for (auto t : tensors()) n += t.size();
  return n;
}

void Params::set_zero() {
  for (auto t : tensors()) std::fill(t.begin(), t.end(), 0.0);
}

void Params::add_scaled(const Params& other, double scale) {
  auto mine = tensors();
  auto theirs = other.tensors();
  for (std::size_t k = 0; k < mine.size(); ++k) {
    for (std::size_t i = 0; i < mine[k].size(); ++i) mine[k][i] += scale * theirs[k][i];
  }
}

Model init_weights(const Dims& dims, std::uint64_t seed) {
  if (dims.vocab < kReservedIds || dims.embed == 0 || dims.hidden == 0 || dims.dense == 0) {
    throw std::invalid_argument("BiLSTM dimensions must be positive and vocab >= 2");
  }
  Model model{dims, Params::zeros(dims)};
  Params& p = model.params;
  Rng rng(seed, RngStream::kInit);

  for (Eigen::Index r = 1; r < p.embedding.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.embedding.cols(); ++c) p.embedding(r, c) = rng.normal(0.0, 0.1);
  }
  const double lstm_bound = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
  const auto H = static_cast<Eigen::Index>(dims.hidden);
  for (LstmBlock* block : {&p.fwd, &p.bwd}) {
    fill_uniform(block->W, lstm_bound, rng);
    fill_uniform(block->U, lstm_bound, rng);
    block->b.setZero();
    block->b.segment(H, H).setOnes();
  }
  fill_uniform(p.fc1_w, 1.0 / std::sqrt(static_cast<double>(2 * dims.hidden)), rng);
  Matrix fc2(1, p.fc2_w.size());
  fill_uniform(fc2, 1.0 / std::sqrt(static_cast<double>(dims.dense)), rng);
  p.fc2_w = fc2.row(0).transpose();
  return model;
}

StepCache lstm_step(const Eigen::Ref<const Vector>& x, const Vector& h_prev,
                    const Vector& c_prev, const LstmBlock& block) {
  const Eigen::Index H = block.U.cols();
  if (x.size() != block.W.cols() || h_prev.size() != H || c_prev.size() != H ||
      block.W.rows() != 4 * H || block.U.rows() != 4 * H || block.b.size() != 4 * H) {
    throw std::invalid_argument("lstm_cell: dimension mismatch");
  }
  const Vector a = block.W * x + block.U * h_prev + block.b;
  StepCache s;
  s.h_prev = h_prev;
  s.c_prev = c_prev;
  s.i = sigmoid(Vector(a.segment(0, H)));
  s.f = sigmoid(Vector(a.segment(H, H)));
  s.g = a.segment(2 * H, H).array().tanh().matrix();
  s.o = sigmoid(Vector(a.segment(3 * H, H)));
  s.c = s.f.cwiseProduct(c_prev) + s.i.cwiseProduct(s.g);
  s.tanh_c = s.c.array().tanh().matrix();
  s.h = s.o.cwiseProduct(s.tanh_c);
  return s;
}

CellState lstm_cell(const Eigen::Ref<const Vector>& x, const Vector& h_prev,
                    const Vector& c_prev, const LstmBlock& block) {
  StepCache s = lstm_step(x, h_prev, c_prev, block);
  return {std::move(s.h), std::move(s.c)};
}

Vector dropout_mask(std::size_t size, double rate, Rng& rng, Mode mode) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument(fmt::format("dropout rate {} outside [0, 1)", rate));
  }
  Vector mask = Vector::Ones(static_cast<Eigen::Index>(size));
  if (mode == Mode::kEval || rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index k = 0; k < mask.size(); ++k) {
    mask[k] = rng.uniform() < rate ? 0.0 : keep_scale;
  }
  return mask;
}

Vector dropout(const Vector& v, double rate, Rng& rng, Mode mode) {
  return v.cwiseProduct(dropout_mask(static_cast<std::size_t>(v.size()), rate, rng, mode));
}

ForwardCache forward(std::span<const std::int32_t> ids, std::size_t length, const Model& model,
                     Mode mode, Rng* rng, double dropout_rate) {
  const Params& p = model.params;
  const auto V = static_cast<std::int64_t>(model.dims.vocab);
  if (length > ids.size()) {
    throw std::invalid_argument("forward: length exceeds the id sequence");
  }
  for (std::int32_t id : ids) {
    if (id < 0 || id >= V) {
      throw std::out_of_range(fmt::format("token id {} outside vocabulary of {}", id, V));
    }
  }
  const auto H = static_cast<Eigen::Index>(model.dims.hidden);

  ForwardCache cache;
  cache.fwd.reserve(length);
  cache.bwd.reserve(length);
  Vector h = Vector::Zero(H);
  Vector c = Vector::Zero(H);
  for (std::size_t t = 0; t < length; ++t) {
    StepCache s = lstm_step(p.embedding.row(ids[t]).transpose(), h, c, p.fwd);
    s.id = ids[t];
    h = s.h;
    c = s.c;
    cache.fwd.push_back(std::move(s));
  }
  cache.rep = Vector::Zero(2 * H);
  cache.rep.head(H) = h;

  h.setZero();
  c.setZero();
  for (std::size_t t = length; t-- > 0;) {
    StepCache s = lstm_step(p.embedding.row(ids[t]).transpose(), h, c, p.bwd);
    s.id = ids[t];
    h = s.h;
    c = s.c;
    cache.bwd.push_back(std::move(s));
  }
  cache.rep.tail(H) = h;

  cache.z1 = p.fc1_w * cache.rep + p.fc1_b;
  if (mode == Mode::kTrain && dropout_rate > 0.0 && rng == nullptr) {
    throw std::invalid_argument("forward: train-mode dropout needs an rng");
  }
  Rng unused(0);
  cache.mask = dropout_mask(static_cast<std::size_t>(cache.z1.size()), dropout_rate,
                            rng ? *rng : unused, mode);
  cache.dropped = cache.z1.cwiseMax(0.0).cwiseProduct(cache.mask);
  cache.logit = p.fc2_w.dot(cache.dropped) + p.fc2_b[0];
  cache.probability = sigmoid(cache.logit);
  return cache;
}

double predict_proba(std::span<const std::int32_t> ids, std::size_t length, const Model& model) {
  return forward(ids, length, model, Mode::kEval, nullptr).probability;
}

double bce_from_logit(double logit, int label) {
  return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

namespace {

// Backpropagation through time for one direction. `steps` is in processing
// order; dh_top is the gradient on the last processed hidden state.
void bptt(const std::vector<StepCache>& steps, const Vector& dh_top, const LstmBlock& block,
          const Matrix& embedding, LstmBlock& grad, Matrix& grad_embedding) {
  const Eigen::Index H = block.U.cols();
  Vector dh = dh_top;
  Vector dc = Vector::Zero(H);
  Vector da(4 * H);
  for (std::size_t s = steps.size(); s-- > 0;) {
    const StepCache& st = steps[s];
    const Vector d_out = dh.cwiseProduct(st.tanh_c);
    dc += dh.cwiseProduct(st.o).cwiseProduct(
        (1.0 - st.tanh_c.array().square()).matrix());
    da.segment(0, H) =
        dc.cwiseProduct(st.g).cwiseProduct((st.i.array() * (1.0 - st.i.array())).matrix());
    da.segment(H, H) =
        dc.cwiseProduct(st.c_prev).cwiseProduct((st.f.array() * (1.0 - st.f.array())).matrix());
    da.segment(2 * H, H) =
        dc.cwiseProduct(st.i).cwiseProduct((1.0 - st.g.array().square()).matrix());
    da.segment(3 * H, H) =
        d_out.cwiseProduct((st.o.array() * (1.0 - st.o.array())).matrix());

    const auto x = embedding.row(st.id);
    grad.W.noalias() += da * x;
    grad.U.noalias() += da * st.h_prev.transpose();
    grad.b += da;
    grad_embedding.row(st.id).noalias() += (block.W.transpose() * da).transpose();
    dh = block.U.transpose() * da;
    dc = dc.cwiseProduct(st.f);
  }
}

}  // namespace

void backward(const ForwardCache& cache, int label, const Model& model, Params& grads,
              double scale) {
  const Params& p = model.params;
  const auto H = static_cast<Eigen::Index>(model.dims.hidden);
  const double dlogit = scale * (cache.probability - static_cast<double>(label));

  grads.fc2_w += dlogit * cache.dropped;
  grads.fc2_b[0] += dlogit;
  const Vector dz1 = (dlogit * p.fc2_w)
                         .cwiseProduct(cache.mask)
                         .cwiseProduct((cache.z1.array() > 0.0).cast<double>().matrix());
  grads.fc1_w.noalias() += dz1 * cache.rep.transpose();
  grads.fc1_b += dz1;
  const Vector drep = p.fc1_w.transpose() * dz1;

  bptt(cache.fwd, drep.head(H), p.fwd, p.embedding, grads.fwd, grads.embedding);
  bptt(cache.bwd, drep.tail(H), p.bwd, p.embedding, grads.bwd, grads.embedding);
  grads.embedding.row(kPadId).setZero();
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& config) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam: size mismatch");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(config.beta1, t);
  const double bias2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[i] / bias1;
    const double v_hat = state.v[i] / bias2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

void Adam::step(Params& params, const Params& grads) {
  auto p = params.tensors();
  auto g = grads.tensors();
  if (states_.empty()) states_.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) adam_step(p[k], g[k], states_[k], config_);
}

Example make_example(std::string_view text, int label, const Vocab& vocab, std::size_t max_len) {
  Encoded enc = encode(tokenize(text), vocab, max_len);
  return {std::move(enc.ids), enc.length, label};
}

void NetTrainConfig::validate() const {
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("dropout must be in [0, 1)");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (hidden < 1 || embed < 1) throw std::invalid_argument("hidden and embed must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

bool EarlyStopping::observe(int epoch, double score) {
  if (best_epoch_ == 0 || score > best_score_) {
    best_epoch_ = epoch;
    best_score_ = score;
    stale_epochs_ = 0;
    return true;
  }
  ++stale_epochs_;
  return false;
}

TrainHistory drive_epochs(int max_epochs, int patience,
                          const std::function<EpochRecord(int)>& run_epoch,
                          const std::function<void(int)>& save_checkpoint) {
  EarlyStopping stopper(patience);
  TrainHistory history;
  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    EpochRecord rec = run_epoch(epoch);
    rec.epoch = epoch;
    history.epochs.push_back(rec);
    history.stopped_epoch = epoch;
    if (stopper.observe(epoch, rec.val_accuracy)) save_checkpoint(epoch);
    if (stopper.should_stop()) break;
  }
  history.best_epoch = stopper.best_epoch();
  return history;
}

namespace {

std::uint64_t dropout_seed(std::uint64_t seed, int epoch, std::size_t position) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s) ^ (static_cast<std::uint64_t>(epoch) * 0x9E3779B97F4A7C15ull);
  a = splitmix64(a) ^ (static_cast<std::uint64_t>(position) * 0xC2B2AE3D27D4EB4Full);
  return a;
}

void check_classes(std::span<const Example> set) {
  const auto ones = std::count_if(set.begin(), set.end(), [](const Example& e) { return e.label == 1; });
  if (ones == 0 || ones == static_cast<std::ptrdiff_t>(set.size())) {
    throw DegenerateDataError("BiLSTM training set must contain both classes");
  }
}

}  // namespace

EvalResult evaluate(const Model& model, std::span<const Example> examples, std::size_t threads) {
  EvalResult out;
  out.probabilities.assign(examples.size(), 0.0);
  std::vector<double> logits(examples.size(), 0.0);
  parallel_chunks(examples.size(), threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const ForwardCache c =
          forward(examples[i].ids, examples[i].length, model, Mode::kEval, nullptr);
      out.probabilities[i] = c.probability;
      logits[i] = c.logit;
    }
  });
  if (examples.empty()) return out;
  std::size_t hits = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    loss += bce_from_logit(logits[i], examples[i].label);
    hits += (out.probabilities[i] >= 0.5 ? 1 : 0) == examples[i].label;
  }
  out.mean_loss = loss / static_cast<double>(examples.size());
  out.accuracy = static_cast<double>(hits) / static_cast<double>(examples.size());
  return out;
}

TrainResult train(std::span<const Example> train_set, std::span<const Example> val_set,
                  std::size_t vocab_size, const NetTrainConfig& config) {
  config.validate();
  if (train_set.empty()) throw DegenerateDataError("BiLSTM training set is empty");
  check_classes(train_set);
  if (val_set.empty()) throw DegenerateDataError("BiLSTM validation set is empty");

  const Dims dims = Dims::for_hidden(vocab_size, config.embed, config.hidden);
  Model model = init_weights(dims, config.seed);
  Params best = model.params;
  Adam adam({config.learning_rate, config.beta1, config.beta2, config.epsilon});
  Rng shuffle_rng(config.seed, RngStream::kShuffle);

  const std::size_t n = train_set.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  const std::size_t max_chunks = effective_chunks(config.batch_size, config.threads);
  std::vector<Params> grads(max_chunks, Params::zeros(dims));
  std::vector<double> chunk_loss(max_chunks, 0.0);

  auto run_epoch = [&](int epoch) {
    shuffle_rng.shuffle(std::span(order));
    double total_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t batch = std::min(config.batch_size, n - start);
      const std::size_t chunks = effective_chunks(batch, config.threads);
      for (std::size_t k = 0; k < chunks; ++k) {
        grads[k].set_zero();
        chunk_loss[k] = 0.0;
      }
      const double scale = 1.0 / static_cast<double>(batch);
      parallel_chunks(batch, config.threads, [&](std::size_t k, std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
          const Example& ex = train_set[order[start + j]];
          Rng drop_rng(dropout_seed(config.seed, epoch, start + j), RngStream::kDropout);
          const ForwardCache cache =
              forward(ex.ids, ex.length, model, Mode::kTrain, &drop_rng, config.dropout);
          chunk_loss[k] += bce_from_logit(cache.logit, ex.label);
          backward(cache, ex.label, model, grads[k], scale);
        }
      });
      for (std::size_t k = 1; k < chunks; ++k) grads[0].add_scaled(grads[k], 1.0);
      for (std::size_t k = 0; k < chunks; ++k) total_loss += chunk_loss[k];
      adam.step(model.params, grads[0]);
    }
    const EvalResult val = evaluate(model, val_set, config.threads);
    EpochRecord rec;
    rec.train_loss = total_loss / static_cast<double>(n);
    rec.val_loss = val.mean_loss;
    rec.val_accuracy = val.accuracy;
    return rec;
  };

  TrainHistory history = drive_epochs(config.max_epochs, config.patience, run_epoch,
                                      [&](int) { best = model.params; });
  model.params = std::move(best);
  return {std::move(model), std::move(history)};
}

std::vector<NetTrainConfig> paper_grid(const NetTrainConfig& base) {
  std::vector<NetTrainConfig> grid;
  for (std::size_t hidden : {64, 128, 256}) {
    for (double rate : {0.2, 0.3, 0.5}) {
      for (std::size_t batch : {128, 256}) {
        for (double lr : {0.0005, 0.001}) {
          NetTrainConfig c = base;
          c.hidden = hidden;
          c.dropout = rate;
          c.batch_size = batch;
          c.learning_rate = lr;
          grid.push_back(c);
        }
      }
    }
  }
  return grid;
}

GridResult grid_search(std::span<const Example> train_set, std::span<const Example> val_set,
                       std::size_t vocab_size, std::span<const NetTrainConfig> configs) {
  if (configs.empty()) throw std::invalid_argument("BiLSTM grid search needs a configuration");
  GridResult result;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    TrainResult run = train(train_set, val_set, vocab_size, configs[k]);
    GridRow row;
    row.config = configs[k];
    row.best_epoch = run.history.best_epoch;
    row.stopped_epoch = run.history.stopped_epoch;
    row.best_val_accuracy = run.history.epochs[static_cast<std::size_t>(row.best_epoch - 1)].val_accuracy;
    if (k == 0 || row.best_val_accuracy > result.rows[result.best].best_val_accuracy) {
      result.best = k;
      result.winner = std::move(run);
    }
    result.rows.push_back(row);
  }
  return result;
}

std::string history_csv(const TrainHistory& history) {
  std::string out = "epoch,train_loss,val_loss,val_acc\n";
  for (const auto& e : history.epochs) {
    out += fmt::format("{},{},{},{}\n", e.epoch, e.train_loss, e.val_loss, e.val_accuracy);
  }
  return out;
}

std::string grid_csv(std::span<const GridRow> rows) {
  std::string out = "hidden,dropout,batch_size,learning_rate,best_val_acc,best_epoch,stopped_epoch\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.config.hidden, r.config.dropout,
                       r.config.batch_size, r.config.learning_rate, r.best_val_accuracy,
                       r.best_epoch, r.stopped_epoch);
  }
  return out;
}

}  // namespace aitd::bilstm
