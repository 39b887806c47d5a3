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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace aitd::oracle {

std::vector<std::string> sorted_vocab(std::span<const Tokens> docs, std::size_t max_size) {
  std::vector<std::string> all;
  for (const auto& d : docs) all.insert(all.end(), d.begin(), d.end());
  std::sort(all.begin(), all.end());
  std::vector<std::pair<std::string, std::size_t>> runs;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    runs.emplace_back(all[i], j - i);
    i = j;
  }
  std::stable_sort(runs.begin(), runs.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < runs.size() && k < max_size; ++k) out.push_back(runs[k].first);
  return out;
}

DenseTfidf dense_tfidf_fit(std::span<const Tokens> docs, std::size_t max_features) {
  DenseTfidf m;
  m.terms = sorted_vocab(docs, max_features);
  const double n = static_cast<double>(docs.size());
  for (const auto& term : m.terms) {
    double df = 0.0;
    for (const auto& d : docs) {
      const std::set<std::string> unique(d.begin(), d.end());
      if (unique.count(term)) df += 1.0;
    }
    m.idf.push_back(std::log((1.0 + n) / (1.0 + df)) + 1.0);
  }
  return m;
}

std::vector<double> dense_tfidf_row(const DenseTfidf& model, const Tokens& doc) {
  std::vector<double> row(model.terms.size(), 0.0);
  for (std::size_t t = 0; t < model.terms.size(); ++t) {
    const double count = static_cast<double>(std::count(doc.begin(), doc.end(), model.terms[t]));
    row[t] = count * model.idf[t];
  }
  double ss = 0.0;
  for (double v : row) ss += v * v;
  if (ss > 0.0) {
    const double norm = std::sqrt(ss);
    for (double& v : row) v /= norm;
  }
  return row;
}

double pairwise_auc(std::span<const int> y, std::span<const double> scores) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  if (pairs == 0.0) throw std::invalid_argument("pairwise_auc needs both classes");
  return wins / pairs;
}

double logreg_objective(const std::vector<double>& w, double b,
                        const std::vector<std::vector<double>>& X, std::span<const int> y,
                        double C, bool l1) {
  const double eps = 1e-12;
  double total = 0.0;
  for (std::size_t r = 0; r < X.size(); ++r) {
    double z = b;
    for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X[r][j];
    double p = 1.0 / (1.0 + std::exp(-z));
    p = std::min(std::max(p, eps), 1.0 - eps);
    total += y[r] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  double pen = 0.0;
  for (double v : w) pen += l1 ? std::abs(v) : 0.5 * v * v;
  const double n = static_cast<double>(X.size());
  return total / n + pen / (n * C);
}

double central_difference(const std::function<double()>& f, double& x, double h) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  const double diff = std::abs(analytic - numeric);
  return scale < floor ? diff : diff / scale;
}

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

ScalarLstmStep scalar_lstm_step(const std::vector<double>& x, const std::vector<double>& h_prev,
                                const std::vector<double>& c_prev,
                                const bilstm::LstmBlock& block) {
  const std::size_t H = h_prev.size();
  ScalarLstmStep s;
  s.i.resize(H);
  s.f.resize(H);
  s.g.resize(H);
  s.o.resize(H);
  s.c.resize(H);
  s.h.resize(H);
  auto pre = [&](std::size_t row) {
    double a = block.b(static_cast<Eigen::Index>(row));
    for (std::size_t e = 0; e < x.size(); ++e) {
      a += block.W(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(e)) * x[e];
    }
    for (std::size_t k = 0; k < H; ++k) {
      a += block.U(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) * h_prev[k];
    }
    return a;
  };
  for (std::size_t j = 0; j < H; ++j) {
    s.i[j] = logistic(pre(j));
    s.f[j] = logistic(pre(H + j));
    s.g[j] = std::tanh(pre(2 * H + j));
    s.o[j] = logistic(pre(3 * H + j));
    s.c[j] = s.f[j] * c_prev[j] + s.i[j] * s.g[j];
    s.h[j] = s.o[j] * std::tanh(s.c[j]);
  }
  return s;
}

double scalar_bilstm_logit(std::span<const std::int32_t> ids, std::size_t length,
                           const bilstm::Model& model) {
  const auto& P = model.params;
  const std::size_t H = model.dims.hidden;
  const std::size_t E = model.dims.embed;
  auto embed = [&](std::int32_t id) {
    std::vector<double> x(E);
    for (std::size_t e = 0; e < E; ++e) x[e] = P.embedding(id, static_cast<Eigen::Index>(e));
    return x;
  };

  std::vector<double> hf(H, 0.0), cf(H, 0.0);
  for (std::size_t t = 0; t < length; ++t) {
    const auto s = scalar_lstm_step(embed(ids[t]), hf, cf, P.fwd);
    hf = s.h;
    cf = s.c;
  }
  std::vector<double> hb(H, 0.0), cb(H, 0.0);
  for (std::size_t t = length; t-- > 0;) {
    const auto s = scalar_lstm_step(embed(ids[t]), hb, cb, P.bwd);
    hb = s.h;
    cb = s.c;
  }

  std::vector<double> rep(hf);
  rep.insert(rep.end(), hb.begin(), hb.end());
  const std::size_t D = model.dims.dense;
  double logit = P.fc2_b(0);
  for (std::size_t d = 0; d < D; ++d) {
    double z = P.fc1_b(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < 2 * H; ++k) {
      z += P.fc1_w(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) * rep[k];
    }
    logit += P.fc2_w(static_cast<Eigen::Index>(d)) * std::max(0.0, z);
  }
  return logit;
}

double split_deviation(std::span<const std::size_t> sizes, std::span<const int> assignment,
                       const std::array<double, 3>& targets) {
  std::array<double, 3> got{};
  double total = 0.0;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    got[static_cast<std::size_t>(assignment[t])] += static_cast<double>(sizes[t]);
    total += static_cast<double>(sizes[t]);
  }
  double dev = 0.0;
  for (std::size_t p = 0; p < 3; ++p) dev += std::abs(got[p] / total - targets[p]);
  return dev;
}

SplitOptimum exhaustive_split(std::span<const std::size_t> sizes,
                              const std::array<double, 3>& targets) {
  const std::size_t k = sizes.size();
  std::size_t combos = 1;
  for (std::size_t t = 0; t < k; ++t) combos *= 3;
  SplitOptimum best;
  best.deviation = std::numeric_limits<double>::infinity();
  std::vector<int> a(k);
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t c = code;
    std::array<bool, 3> used{};
    for (std::size_t t = 0; t < k; ++t) {
      a[t] = static_cast<int>(c % 3);
      used[c % 3] = true;
      c /= 3;
    }
    if (!used[0] || !used[1] || !used[2]) continue;
    const double dev = split_deviation(sizes, a, targets);
    if (dev < best.deviation) {
      best.deviation = dev;
      best.assignment = a;
    }
  }
  return best;
}

AdamTrace adam_scalar_trace(double theta0, std::span<const double> grads, double lr, double beta1,
                            double beta2, double eps) {
  AdamTrace tr;
  double m = 0.0, v = 0.0, theta = theta0;
  for (std::size_t t = 1; t <= grads.size(); ++t) {
    const double g = grads[t - 1];
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g * g;
    const double mhat = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
    const double vhat = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
    theta -= lr * mhat / (std::sqrt(vhat) + eps);
    tr.m.push_back(m);
    tr.v.push_back(v);
    tr.theta.push_back(theta);
  }
  return tr;
}

}  // namespace aitd::oracle
