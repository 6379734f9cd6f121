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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "soilml/matrix.hpp"

namespace soilml {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
  bool operator==(const AdamState&) const = default;
};

/// One bias-corrected Adam update of `params` in place; increments
/// state.step. Throws DimensionMismatch.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const AdamConfig& cfg);

struct MlpConfig {
  std::size_t hidden_layers = 9;
  std::size_t hidden_width = 32;
  double elu_alpha = 1.0;
  double l2_lambda = 1e-4;
  std::size_t epochs = 150;
  std::size_t batch_size = 128;
  AdamConfig adam;
  double bn_eps = 1e-5;
  double bn_momentum = 0.9;

  bool operator==(const MlpConfig&) const = default;
};

double elu(double x, double alpha = 1.0) noexcept;

/// Offsets of each parameter block inside the flat parameter vector.
///
/// Hidden layer l owns W (width x fan_in, row-major), b, gamma and beta;
/// the output layer owns W (1 x width) and b. Running batch-norm statistics
/// live in a separate, non-trainable vector.
struct MlpLayout {
  std::size_t n_inputs = 0;
  std::size_t hidden_layers = 0;
  std::size_t width = 0;

  struct Hidden {
    std::size_t fan_in = 0;
    std::size_t weight = 0;
    std::size_t bias = 0;
    std::size_t gamma = 0;
    std::size_t beta = 0;
  };
  std::vector<Hidden> hidden;
  std::size_t out_weight = 0;
  std::size_t out_bias = 0;
  std::size_t n_params = 0;

  MlpLayout() = default;
  MlpLayout(std::size_t n_inputs, std::size_t hidden_layers, std::size_t width);

  /// True for entries that belong to a weight matrix (the L2-penalised set).
  std::vector<bool> weight_mask() const;
};

struct MlpModel {
  MlpConfig config;
  MlpLayout layout;
  std::vector<double> params;
  std::vector<double> running_mean;  // hidden_layers * width
  std::vector<double> running_var;   // hidden_layers * width

  bool operator==(const MlpModel& o) const {
    return config == o.config && params == o.params && running_mean == o.running_mean &&
           running_var == o.running_var && layout.n_inputs == o.layout.n_inputs;
  }
};

/// He-normal weights truncated at +-2 sigma (resampled), zero biases,
/// batch-norm scale 1 / shift 0, running mean 0 / variance 1.
MlpModel mlp_init(const MlpConfig& cfg, std::size_t n_features, std::uint64_t seed);

enum class MlpMode { Train, Infer };

/// Batch statistics captured by a train-mode pass.
struct MlpBatchStats {
  std::vector<double> mean;  // hidden_layers * width
  std::vector<double> var;   // population variance
};

/// Forward pass. Train mode uses batch statistics (batch >= 2, else
/// BatchTooSmall) and fills `stats` when given; infer mode uses the running
/// statistics. Does not modify the model.
std::vector<double> mlp_forward(const MlpModel& m, const Matrix& batch, MlpMode mode,
                                MlpBatchStats* stats = nullptr);

/// Pre-activation outputs of hidden layer `layer` after normalisation and
/// before scale/shift, in train mode. Exposed for batch-norm checks.
Matrix mlp_normalized_preactivations(const MlpModel& m, const Matrix& batch, std::size_t layer);

/// running = momentum * running + (1 - momentum) * batch.
void mlp_update_running_stats(MlpModel& m, const MlpBatchStats& stats);

struct MlpGradient {
  double loss = 0.0;        // MSE + l2_lambda * sum(W^2)
  double mse = 0.0;
  std::vector<double> grad;  // same layout as params
};

/// Reverse-mode gradient of the train-mode loss with respect to every
/// trainable parameter. Throws BatchTooSmall for fewer than 2 rows.
MlpGradient mlp_grad(const MlpModel& m, const Matrix& batch, std::span<const double> target,
                     MlpBatchStats* stats = nullptr);

struct MlpFit {
  MlpModel model;
  std::vector<double> loss_history;  // per-epoch mean training loss
};

/// Mini-batch Adam training. Epoch e shuffles rows with stream split(e) of the
/// epoch RNG; a trailing batch with fewer than 2 rows joins the previous one.
/// Throws TooFewRows for fewer than 2 rows.
MlpFit mlp_fit(const Matrix& x, std::span<const double> y, const MlpConfig& cfg,
               std::uint64_t seed);

std::vector<double> mlp_predict(const MlpModel& m, const Matrix& x);

}  // namespace soilml
