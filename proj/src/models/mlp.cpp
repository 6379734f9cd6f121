/*
 * Copyright (c) 2026, The soilml Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "soilml/models/mlp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "soilml/error.hpp"
#include "soilml/rng.hpp"

namespace soilml {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVec = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using ConstMatMap = Eigen::Map<const RowMat>;
using ConstVecMap = Eigen::Map<const RowVec>;
using VecMap = Eigen::Map<RowVec>;
using MatMap = Eigen::Map<RowMat>;

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kEpochStream = 1;

struct LayerCache {
  RowMat input;  // activations entering the layer
  RowMat xhat;   // normalised pre-activations
  RowVec inv_std;
  RowMat y;      // after scale/shift, before ELU
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  RowMat last_hidden;
  Eigen::VectorXd output;
};

ConstMatMap weights(const MlpModel& m, std::size_t offset, std::size_t rows, std::size_t cols) {
  return ConstMatMap(m.params.data() + offset, static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(cols));
}

ConstVecMap vec(const std::vector<double>& v, std::size_t offset, std::size_t n) {
  return ConstVecMap(v.data() + offset, static_cast<Eigen::Index>(n));
}

RowMat apply_elu(const RowMat& y, double alpha) {
  return y.unaryExpr([alpha](double v) { return elu(v, alpha); });
}

ForwardCache forward(const MlpModel& m, const Matrix& batch, MlpMode mode,
                     MlpBatchStats* stats, bool keep_cache) {
  const auto& lay = m.layout;
  if (batch.cols() != lay.n_inputs) {
    fail(ErrorCode::DimensionMismatch, "batch width differs from network input width");
  }
  if (batch.rows() == 0) fail(ErrorCode::Empty, "empty batch");
  if (mode == MlpMode::Train && batch.rows() < 2) {
    fail(ErrorCode::BatchTooSmall, "train-mode batch normalisation needs at least 2 rows",
         static_cast<long long>(batch.rows()));
  }
  const auto rows = static_cast<Eigen::Index>(batch.rows());
  const std::size_t w = lay.width;
  const double eps = m.config.bn_eps;

  ForwardCache cache;
  if (stats) {
    stats->mean.assign(lay.hidden_layers * w, 0.0);
    stats->var.assign(lay.hidden_layers * w, 0.0);
  }
  RowMat a = ConstMatMap(batch.data().data(), rows, static_cast<Eigen::Index>(batch.cols()));
  for (std::size_t l = 0; l < lay.hidden_layers; ++l) {
    const auto& h = lay.hidden[l];
    RowMat z = a * weights(m, h.weight, w, h.fan_in).transpose();
    z.rowwise() += vec(m.params, h.bias, w);

    RowVec mean, var;
    if (mode == MlpMode::Train) {
      mean = z.colwise().mean();
      var = (z.rowwise() - mean).array().square().colwise().mean();
    } else {
      mean = vec(m.running_mean, l * w, w);
      var = vec(m.running_var, l * w, w);
    }
    if (stats) {
      VecMap(stats->mean.data() + l * w, static_cast<Eigen::Index>(w)) = mean;
      VecMap(stats->var.data() + l * w, static_cast<Eigen::Index>(w)) = var;
    }
    const RowVec inv_std = (var.array() + eps).rsqrt().matrix();
    RowMat xhat = (z.rowwise() - mean).array().rowwise() * inv_std.array();
    RowMat y = xhat.array().rowwise() * vec(m.params, h.gamma, w).array();
    y.rowwise() += vec(m.params, h.beta, w);
    RowMat next = apply_elu(y, m.config.elu_alpha);
    if (keep_cache) {
      cache.layers.push_back(LayerCache{std::move(a), std::move(xhat), inv_std, std::move(y)});
    }
    a = std::move(next);
  }
  cache.output = a * weights(m, lay.out_weight, 1, w).transpose();
  cache.output.array() += m.params[lay.out_bias];
  cache.last_hidden = std::move(a);
  return cache;
}

}  // namespace

double elu(double x, double alpha) noexcept { return x >= 0.0 ? x : alpha * std::expm1(x); }

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const AdamConfig& cfg) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    fail(ErrorCode::DimensionMismatch, "Adam state, parameters and gradients differ in size");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

MlpLayout::MlpLayout(std::size_t inputs, std::size_t layers, std::size_t w)
    : n_inputs(inputs), hidden_layers(layers), width(w) {
  std::size_t off = 0;
  std::size_t fan_in = inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    Hidden h;
    h.fan_in = fan_in;
    h.weight = off;
    off += w * fan_in;
    h.bias = off;
    off += w;
    h.gamma = off;
    off += w;
    h.beta = off;
    off += w;
    hidden.push_back(h);
    fan_in = w;
  }
  out_weight = off;
  off += fan_in;
  out_bias = off;
  off += 1;
  n_params = off;
}

std::vector<bool> MlpLayout::weight_mask() const {
  std::vector<bool> mask(n_params, false);
  for (const auto& h : hidden) {
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(h.weight),
              mask.begin() + static_cast<std::ptrdiff_t>(h.weight + width * h.fan_in), true);
  }
  std::fill(mask.begin() + static_cast<std::ptrdiff_t>(out_weight),
            mask.begin() + static_cast<std::ptrdiff_t>(out_bias), true);
  return mask;
}

MlpModel mlp_init(const MlpConfig& cfg, std::size_t n_features, std::uint64_t seed) {
  if (n_features < 1 || cfg.hidden_layers < 1 || cfg.hidden_width < 1) {
    fail(ErrorCode::BadConfig, "network needs at least one input, layer and unit");
  }
  MlpModel m;
  m.config = cfg;
  m.layout = MlpLayout(n_features, cfg.hidden_layers, cfg.hidden_width);
  m.params.assign(m.layout.n_params, 0.0);
  m.running_mean.assign(cfg.hidden_layers * cfg.hidden_width, 0.0);
  m.running_var.assign(cfg.hidden_layers * cfg.hidden_width, 1.0);

  const Rng init_root = Rng(seed).split(kInitStream);
  auto fill_he = [&](std::size_t offset, std::size_t count, std::size_t fan_in,
                     std::uint64_t stream) {
    Rng rng = init_root.split(stream);
    const double sigma = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) {
      double z = rng.normal();
      while (std::abs(z) > 2.0) z = rng.normal();
      m.params[offset + i] = sigma * z;
    }
  };
  for (std::size_t l = 0; l < cfg.hidden_layers; ++l) {
    const auto& h = m.layout.hidden[l];
    fill_he(h.weight, cfg.hidden_width * h.fan_in, h.fan_in, l);
    std::fill_n(m.params.begin() + static_cast<std::ptrdiff_t>(h.gamma), cfg.hidden_width, 1.0);
  }
  fill_he(m.layout.out_weight, cfg.hidden_width, cfg.hidden_width, cfg.hidden_layers);
  return m;
}

std::vector<double> mlp_forward(const MlpModel& m, const Matrix& batch, MlpMode mode,
                                MlpBatchStats* stats) {
  const auto cache = forward(m, batch, mode, stats, false);
  return {cache.output.data(), cache.output.data() + cache.output.size()};
}

Matrix mlp_normalized_preactivations(const MlpModel& m, const Matrix& batch, std::size_t layer) {
  if (layer >= m.layout.hidden_layers) fail(ErrorCode::InvalidArgument, "no such hidden layer");
  const auto cache = forward(m, batch, MlpMode::Train, nullptr, true);
  const auto& xhat = cache.layers[layer].xhat;
  Matrix out(static_cast<std::size_t>(xhat.rows()), static_cast<std::size_t>(xhat.cols()));
  MatMap(out.data().data(), xhat.rows(), xhat.cols()) = xhat;
  return out;
}

void mlp_update_running_stats(MlpModel& m, const MlpBatchStats& stats) {
  const double mom = m.config.bn_momentum;
  for (std::size_t i = 0; i < m.running_mean.size(); ++i) {
    m.running_mean[i] = mom * m.running_mean[i] + (1.0 - mom) * stats.mean[i];
    m.running_var[i] = mom * m.running_var[i] + (1.0 - mom) * stats.var[i];
  }
}

MlpGradient mlp_grad(const MlpModel& m, const Matrix& batch, std::span<const double> target,
                     MlpBatchStats* stats) {
  if (target.size() != batch.rows()) {
    fail(ErrorCode::LengthMismatch, "batch rows and targets differ");
  }
  const auto cache = forward(m, batch, MlpMode::Train, stats, true);
  const auto& lay = m.layout;
  const std::size_t w = lay.width;
  const auto rows = static_cast<Eigen::Index>(batch.rows());
  const double inv_n = 1.0 / static_cast<double>(batch.rows());
  const double lambda = m.config.l2_lambda;

  MlpGradient out;
  out.grad.assign(lay.n_params, 0.0);

  const Eigen::Map<const Eigen::VectorXd> y(target.data(), rows);
  const Eigen::VectorXd err = cache.output - y;
  out.mse = err.squaredNorm() * inv_n;
  // Weight blocks as [begin, end) ranges of the flat vector.
  std::vector<std::pair<std::size_t, std::size_t>> wblocks;
  for (const auto& h : lay.hidden) wblocks.emplace_back(h.weight, h.weight + w * h.fan_in);
  wblocks.emplace_back(lay.out_weight, lay.out_bias);
  double l2 = 0.0;
  for (const auto& [b, e] : wblocks) {
    for (std::size_t i = b; i < e; ++i) l2 += m.params[i] * m.params[i];
  }
  out.loss = out.mse + lambda * l2;

  // Output layer.
  const Eigen::VectorXd d_out = 2.0 * inv_n * err;
  VecMap(out.grad.data() + lay.out_weight, static_cast<Eigen::Index>(w)) =
      d_out.transpose() * cache.last_hidden;
  out.grad[lay.out_bias] = d_out.sum();
  RowMat d_a = d_out * weights(m, lay.out_weight, 1, w);

  for (std::size_t li = lay.hidden_layers; li-- > 0;) {
    const auto& h = lay.hidden[li];
    const auto& c = cache.layers[li];
    const double alpha = m.config.elu_alpha;
    // ELU'(v) = alpha e^v = elu(v) + alpha for v < 0; reuse the cached activation.
    const RowMat& act = li + 1 < lay.hidden_layers ? cache.layers[li + 1].input : cache.last_hidden;
    const RowMat d_y =
        d_a.array() * (c.y.array() >= 0.0).select(RowMat::Ones(rows, static_cast<Eigen::Index>(w)),
                                                   act.array() + alpha).array();
    VecMap(out.grad.data() + h.gamma, static_cast<Eigen::Index>(w)) =
        (d_y.array() * c.xhat.array()).colwise().sum();
    VecMap(out.grad.data() + h.beta, static_cast<Eigen::Index>(w)) = d_y.colwise().sum();

    const RowMat d_xhat = d_y.array().rowwise() * vec(m.params, h.gamma, w).array();
    const RowVec mean_dx = d_xhat.colwise().mean();
    const RowVec mean_dx_xhat = (d_xhat.array() * c.xhat.array()).colwise().mean();
    RowMat d_z = d_xhat.rowwise() - mean_dx;
    d_z.array() -= c.xhat.array().rowwise() * mean_dx_xhat.array();
    d_z.array().rowwise() *= c.inv_std.array();

    MatMap(out.grad.data() + h.weight, static_cast<Eigen::Index>(w),
           static_cast<Eigen::Index>(h.fan_in)) = d_z.transpose() * c.input;
    VecMap(out.grad.data() + h.bias, static_cast<Eigen::Index>(w)) = d_z.colwise().sum();
    if (li > 0) d_a = d_z * weights(m, h.weight, w, h.fan_in);
  }

  for (const auto& [b, e] : wblocks) {
    for (std::size_t i = b; i < e; ++i) out.grad[i] += 2.0 * lambda * m.params[i];
  }
  return out;
}

MlpFit mlp_fit(const Matrix& x, std::span<const double> y, const MlpConfig& cfg,
               std::uint64_t seed) {
  if (x.rows() < 2) {
    fail(ErrorCode::TooFewRows, "network training needs at least 2 rows",
         static_cast<long long>(x.rows()));
  }
  if (x.rows() != y.size()) fail(ErrorCode::LengthMismatch, "feature rows and targets differ");
  if (cfg.epochs < 1 || cfg.batch_size < 1) {
    fail(ErrorCode::BadConfig, "epochs and batch_size must be at least 1");
  }
  MlpFit fit;
  fit.model = mlp_init(cfg, x.cols(), seed);
  auto& model = fit.model;
  AdamState adam(model.layout.n_params);
  const Rng epoch_root = Rng(seed).split(kEpochStream);

  const std::size_t n = x.rows();
  std::vector<std::size_t> order(n);
  std::vector<std::pair<std::size_t, std::size_t>> batches;  // [begin, end)
  for (std::size_t b = 0; b < n; b += cfg.batch_size) {
    batches.emplace_back(b, std::min(n, b + cfg.batch_size));
  }
  if (batches.size() > 1 && batches.back().second - batches.back().first < 2) {
    batches[batches.size() - 2].second = n;
    batches.pop_back();
  }

  Matrix xb;
  std::vector<double> yb;
  MlpBatchStats stats;
  fit.loss_history.reserve(cfg.epochs);
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = epoch_root.split(e);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

    double epoch_loss = 0.0;
    for (const auto& [begin, end] : batches) {
      const std::span<const std::size_t> idx(order.data() + begin, end - begin);
      xb = x.select_rows(idx);
      yb.resize(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) yb[i] = y[idx[i]];
      const auto g = mlp_grad(model, xb, yb, &stats);
      adam_step(adam, model.params, g.grad, cfg.adam);
      mlp_update_running_stats(model, stats);
      epoch_loss += g.loss * static_cast<double>(idx.size());
    }
    fit.loss_history.push_back(epoch_loss / static_cast<double>(n));
  }
  return fit;
}

std::vector<double> mlp_predict(const MlpModel& m, const Matrix& x) {
  if (x.rows() == 0) return {};
  return mlp_forward(m, x, MlpMode::Infer);
}

}  // namespace soilml
